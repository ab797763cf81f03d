#pragma once

#include <cstdint>
#include <vector>

#include "nfwpt/circle_manifold.hpp"
#include "nfwpt/dma.hpp"
#include "nfwpt/precoder.hpp"
#include "nfwpt/scenario.hpp"

namespace nfwpt {

struct SolverOptions {
  int outer_iterations = 30;
  double relative_tolerance = 1e-5;
  int restarts = 4;
  std::uint64_t seed = 0;
  RcgOptions rcg;
  EigenOptions eigen;
};

void validate(const SolverOptions& options);

enum class SolveStatus { Converged, NotConverged, Unservable };

std::string_view to_string(SolveStatus status);

/// One RCG run inside the outer loop.
struct InnerTrace {
  std::vector<double> objective;
  std::vector<double> gradient_norm;
  RcgStop stop = RcgStop::IterationCap;
};

struct RestartTrace {
  /// Weighted objective sum_m alpha_m E_m with ||w||^2 = P_max, recorded after
  /// every half-step: precoder update, DMA update, precoder update, ...
  std::vector<double> objective;
  /// Same objective with the precoder rescaled to ||H Q w||^2 = P_max.
  double final_objective = 0.0;
  bool converged = false;
  std::vector<InnerTrace> inner;
};

struct SolverReport {
  SolveStatus status = SolveStatus::NotConverged;
  std::vector<double> energies_w;  ///< E_m at the rescaled precoder
  double objective = 0.0;          ///< sum_m alpha_m E_m at the rescaled precoder
  std::size_t chosen_restart = 0;
  std::vector<RestartTrace> restarts;
  double wall_time_s = 0.0;

  const std::vector<double>& objective_trace() const {
    return restarts.at(chosen_restart).objective;
  }
};

struct Solution {
  DmaState dma;
  Precoder precoder;
  SolverReport report;
};

/// Alternates the closed-form precoder with RCG over the DMA phases from
/// seeded random starts, then scales w so that ||H Q w||^2 = P_max. The best
/// restart by rescaled objective wins; ties go to the lower index.
Solution solve(const Scenario& scenario, const SolverOptions& options = {});

/// E_m = zeta |a_m^H H Q w|^2.
std::vector<double> harvested_energies(const DmaState& state, const Precoder& precoder,
                                       const Scenario& scenario,
                                       std::span<const ChannelVector> channels,
                                       const WaveguideMatrix& waveguide);
std::vector<double> harvested_energies(const DmaState& state, const Precoder& precoder,
                                       const Scenario& scenario);

double weighted_objective(std::span<const double> energies, std::span<const double> weights);

/// Uniform phases on [0, 2 pi) from a 64-bit Mersenne twister, converted with
/// 53-bit mantissa arithmetic so results are identical across standard libraries.
std::vector<double> random_phases(std::size_t count, std::uint64_t seed);

}  // namespace nfwpt
