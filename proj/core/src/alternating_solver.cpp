#include "nfwpt/alternating_solver.hpp"

#include <chrono>
#include <cmath>
#include <optional>
#include <random>
#include <stdexcept>

namespace nfwpt {

void validate(const SolverOptions& options) {
  if (options.outer_iterations < 1)
    throw std::invalid_argument("solver: outer_iterations must be >= 1");
  if (options.restarts < 1) throw std::invalid_argument("solver: restarts must be >= 1");
  if (!(options.relative_tolerance >= 0.0))
    throw std::invalid_argument("solver: relative_tolerance must be >= 0");
  if (!(options.eigen.tolerance > 0.0) || options.eigen.max_iterations < 1)
    throw std::invalid_argument("solver: invalid eigen options");
  validate(options.rcg);
}

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::NotConverged: return "not-converged";
    case SolveStatus::Unservable: return "unservable";
  }
  return "unknown";
}

std::vector<double> random_phases(std::size_t count, std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32)};
  std::mt19937_64 gen(seq);
  std::vector<double> out(count);
  for (auto& p : out) {
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    p = kTwoPi * u;
  }
  return out;
}

std::vector<double> harvested_energies(const DmaState& state, const Precoder& precoder,
                                       const Scenario& scenario,
                                       std::span<const ChannelVector> channels,
                                       const WaveguideMatrix& waveguide) {
  const ComplexVector r = radiated_signal(state, waveguide, precoder.w);
  std::vector<double> out;
  out.reserve(channels.size());
  for (const auto& a : channels) out.push_back(scenario.zeta * std::norm(a.entries.dot(r)));
  return out;
}

std::vector<double> harvested_energies(const DmaState& state, const Precoder& precoder,
                                       const Scenario& scenario) {
  const auto channels = channel_vectors(scenario.geometry, scenario.receivers);
  return harvested_energies(state, precoder, scenario, channels,
                            WaveguideMatrix(scenario.geometry));
}

double weighted_objective(std::span<const double> energies, std::span<const double> weights) {
  if (energies.size() != weights.size())
    throw std::invalid_argument("weighted_objective: size mismatch");
  double acc = 0.0;
  for (std::size_t m = 0; m < energies.size(); ++m) acc += weights[m] * energies[m];
  return acc;
}

namespace {

struct RestartOutcome {
  DmaState dma;
  Precoder precoder;  // rescaled
  std::vector<double> energies;
  RestartTrace trace;
  bool eigen_converged = true;
};

class Problem {
 public:
  explicit Problem(const Scenario& scenario)
      : scenario_(scenario),
        channels_(channel_vectors(scenario.geometry, scenario.receivers)),
        waveguide_(scenario.geometry),
        weights_(scenario.weights()) {}

  bool servable() const {
    for (std::size_t m = 0; m < channels_.size(); ++m)
      if (weights_[m] > 0.0 && channels_[m].gain() > 0.0) return true;
    return false;
  }

  double weighted(const DmaState& state, const Precoder& w) const {
    return weighted_objective(
        harvested_energies(state, w, scenario_, channels_, waveguide_), weights_);
  }

  RestartOutcome run(std::vector<double> phases, const SolverOptions& options) const {
    const auto& g = scenario_.geometry;
    DmaState state(g.microstrips(), g.elements_per_microstrip(), std::move(phases));
    RestartOutcome out{state, {}, {}, {}, true};

    PrecoderSolution pre;
    double previous = 0.0;
    for (int t = 0;; ++t) {
      pre = precoder_for(state, scenario_, channels_, waveguide_, options.eigen);
      out.eigen_converged = out.eigen_converged && pre.converged;
      const double current = weighted(state, pre.precoder);
      out.trace.objective.push_back(current);
      if (t > 0 && std::abs(current - previous) <= options.relative_tolerance * std::abs(current)) {
        out.trace.converged = true;
        break;
      }
      if (t == options.outer_iterations) break;
      previous = current;

      QuadraticForm form = build_quadratic_form(
          reduced_channels(pre.precoder.w, channels_, waveguide_, g.elements_per_microstrip()),
          weights_, scenario_.zeta);
      const RcgResult rcg = rcg_minimize(form, state.circle_point(), options.rcg);
      out.trace.inner.push_back({rcg.trace, rcg.gradient_norms, rcg.stop});
      state = DmaState::from_circle(g.microstrips(), g.elements_per_microstrip(), rcg.b);
      out.trace.objective.push_back(-objective(form, rcg.b));
    }

    // Transmitted-power constraint ||H Q w||^2 = P_max.
    const double radiated = radiated_signal(state, waveguide_, pre.precoder.w).norm();
    out.precoder = pre.precoder;
    if (radiated > 0.0) out.precoder.w *= std::sqrt(scenario_.p_max_w) / radiated;
    out.dma = std::move(state);
    out.energies = harvested_energies(out.dma, out.precoder, scenario_, channels_, waveguide_);
    out.trace.final_objective = weighted_objective(out.energies, weights_);
    return out;
  }

 private:
  const Scenario& scenario_;
  std::vector<ChannelVector> channels_;
  WaveguideMatrix waveguide_;
  std::vector<double> weights_;
};

}  // namespace

Solution solve(const Scenario& scenario, const SolverOptions& options) {
  validate(scenario);
  validate(options);
  const auto start = std::chrono::steady_clock::now();
  const auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  const Problem problem(scenario);
  const std::size_t n = scenario.geometry.element_count();
  const std::size_t nd = scenario.geometry.microstrips();

  if (!problem.servable()) {
    DmaState dma(nd, scenario.geometry.elements_per_microstrip(),
                 random_phases(n, options.seed));
    Precoder w{ComplexVector::Zero(static_cast<Eigen::Index>(nd))};
    w.w[0] = std::sqrt(scenario.p_max_w);
    Solution out{std::move(dma), std::move(w), {}};
    out.report.status = SolveStatus::Unservable;
    out.report.energies_w.assign(scenario.receivers.size(), 0.0);
    out.report.restarts.push_back(RestartTrace{{0.0}, 0.0, false, {}});
    out.report.wall_time_s = elapsed();
    return out;
  }

  std::optional<RestartOutcome> best;
  SolverReport report;
  bool best_eigen_ok = true;
  for (int r = 0; r < options.restarts; ++r) {
    RestartOutcome outcome =
        problem.run(random_phases(n, options.seed + static_cast<std::uint64_t>(r)), options);
    report.restarts.push_back(outcome.trace);
    if (!best || outcome.trace.final_objective > best->trace.final_objective) {
      report.chosen_restart = static_cast<std::size_t>(r);
      best_eigen_ok = outcome.eigen_converged;
      best = std::move(outcome);
    }
  }

  report.energies_w = best->energies;
  report.objective = best->trace.final_objective;
  report.status = best->trace.converged && best_eigen_ok ? SolveStatus::Converged
                                                         : SolveStatus::NotConverged;
  report.wall_time_s = elapsed();
  return Solution{std::move(best->dma), std::move(best->precoder), std::move(report)};
}

}  // namespace nfwpt
