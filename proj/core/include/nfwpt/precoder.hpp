#pragma once

#include <span>

#include "nfwpt/dma.hpp"
#include "nfwpt/propagation.hpp"
#include "nfwpt/scenario.hpp"

namespace nfwpt {

/// G(Q) = zeta sum_m alpha_m Q^H H^H a_m a_m^H H Q, an N_d x N_d Hermitian
/// PSD matrix of rank <= M. w^H G w is the weighted sum of harvested energies.
struct EnergyMatrix {
  ComplexMatrix matrix;
};

EnergyMatrix build_energy_matrix(const DmaState& state,
                                 std::span<const ChannelVector> channels,
                                 const WaveguideMatrix& waveguide,
                                 std::span<const double> weights, double zeta);

struct EigenOptions {
  double tolerance = 1e-10;
  int max_iterations = 5000;
};

struct DominantEigenpair {
  double value = 0.0;
  ComplexVector vector;
  int iterations = 0;
  bool converged = false;
  /// True when the matrix is identically zero; `vector` is then e_1.
  bool degenerate = false;
};

/// Deterministic power iteration from the normalized all-ones vector.
/// Stops once ||G v - lambda v|| <= tolerance * lambda. If plain iteration
/// stalls on a small eigengap, the iterated operator is squared to widen it.
DominantEigenpair max_eigvec(const ComplexMatrix& g, const EigenOptions& options = {});

struct Precoder {
  ComplexVector w;

  double power() const { return w.squaredNorm(); }
};

struct PrecoderSolution {
  Precoder precoder;
  double eigenvalue = 0.0;
  bool converged = false;
  /// G vanished: no receiver with positive weight sees the aperture.
  bool unservable = false;
};

/// w_1 = sqrt(P_max) v_max(G(Q)); one precoding vector carries all power.
PrecoderSolution precoder_for(const DmaState& state, const Scenario& scenario,
                              std::span<const ChannelVector> channels,
                              const WaveguideMatrix& waveguide,
                              const EigenOptions& options = {});

/// H Q w, the signal radiated by the aperture.
ComplexVector radiated_signal(const DmaState& state, const WaveguideMatrix& waveguide,
                              const ComplexVector& w);

}  // namespace nfwpt
