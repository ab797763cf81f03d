#include "nfwpt/precoder.hpp"

#include <cmath>
#include <stdexcept>

namespace nfwpt {

EnergyMatrix build_energy_matrix(const DmaState& state, std::span<const ChannelVector> channels,
                                 const WaveguideMatrix& waveguide,
                                 std::span<const double> weights, double zeta) {
  if (channels.size() != weights.size())
    throw std::invalid_argument("build_energy_matrix: one weight per channel required");
  const auto nd = static_cast<Eigen::Index>(state.microstrips());
  EnergyMatrix g{ComplexMatrix::Zero(nd, nd)};
  for (std::size_t m = 0; m < channels.size(); ++m) {
    if (weights[m] == 0.0) continue;
    // g_m = Q^H H^H a_m, so that g_m^H w = a_m^H H Q w.
    const ComplexVector gm = state.apply_adjoint(waveguide.apply_adjoint(channels[m].entries));
    g.matrix.noalias() += (zeta * weights[m]) * gm * gm.adjoint();
  }
  // Rank-one updates are Hermitian up to rounding; make it exact.
  g.matrix = 0.5 * (g.matrix + g.matrix.adjoint()).eval();
  return g;
}

DominantEigenpair max_eigvec(const ComplexMatrix& g, const EigenOptions& options) {
  if (g.rows() != g.cols() || g.rows() == 0)
    throw std::invalid_argument("max_eigvec: matrix must be square and non-empty");
  const Eigen::Index n = g.rows();
  DominantEigenpair out;
  out.vector = ComplexVector::Zero(n);

  const double scale = g.norm();
  if (scale == 0.0) {
    out.vector[0] = 1.0;
    out.degenerate = true;
    out.converged = true;
    return out;
  }

  ComplexVector v = ComplexVector::Ones(n) / std::sqrt(static_cast<double>(n));
  if ((g * v).norm() <= 1e-14 * scale) {
    // All-ones start is orthogonal to the range; tilt it towards the first
    // basis vector that G does not annihilate.
    for (Eigen::Index k = 0; k < n; ++k) {
      if (g.col(k).norm() > 1e-14 * scale) {
        v = ComplexVector::Ones(n);
        v[k] += 1.0;
        v.normalize();
        break;
      }
    }
  }

  constexpr int kSquaringPeriod = 32;
  ComplexMatrix op = g / scale;
  double lambda = 0.0;
  for (int it = 1; it <= options.max_iterations; ++it) {
    ComplexVector u = op * v;
    const double norm = u.norm();
    if (norm == 0.0) break;
    v = u / norm;

    const ComplexVector gv = g * v;
    lambda = v.dot(gv).real();
    out.iterations = it;
    if ((gv - lambda * v).norm() <= options.tolerance * lambda) {
      out.converged = true;
      break;
    }
    if (it % kSquaringPeriod == 0) {
      ComplexMatrix sq = op * op;
      sq = 0.5 * (sq + sq.adjoint()).eval();
      const double sq_norm = sq.norm();
      if (sq_norm > 0.0) op = sq / sq_norm;
    }
  }
  out.value = lambda;
  out.vector = v;
  return out;
}

ComplexVector radiated_signal(const DmaState& state, const WaveguideMatrix& waveguide,
                              const ComplexVector& w) {
  return waveguide.apply(state.apply(w));
}

PrecoderSolution precoder_for(const DmaState& state, const Scenario& scenario,
                              std::span<const ChannelVector> channels,
                              const WaveguideMatrix& waveguide, const EigenOptions& options) {
  const std::vector<double> weights = scenario.weights();
  const EnergyMatrix g =
      build_energy_matrix(state, channels, waveguide, weights, scenario.zeta);
  const DominantEigenpair pair = max_eigvec(g.matrix, options);

  PrecoderSolution out;
  out.precoder.w = std::sqrt(scenario.p_max_w) * pair.vector;
  out.eigenvalue = pair.value;
  out.converged = pair.converged;
  out.unservable = pair.degenerate;
  return out;
}

}  // namespace nfwpt
