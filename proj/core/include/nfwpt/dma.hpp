#pragma once

#include <span>
#include <vector>

#include "nfwpt/propagation.hpp"
#include "nfwpt/types.hpp"

namespace nfwpt {

/// Lorentzian-constrained element response (j + e^{j phi}) / 2.
inline Complex lorentzian_weight(double phase) {
  return 0.5 * (kImagUnit + std::polar(1.0, phase));
}

/// Maps an angle into [0, 2 pi).
double wrap_phase(double phase);

/// Tunable DMA configuration. Phases are the single source of truth; the
/// weights q, the flattened q-bar and the unit-circle variable b are derived.
///
/// The configuration matrix Q (N x N_d) is block diagonal: column i holds the
/// N_e weights of microstrip i. It is never materialized.
class DmaState {
 public:
  /// `phases` is microstrip-major with n_microstrips * elements_per_microstrip
  /// entries. Throws std::invalid_argument on a shape mismatch.
  DmaState(std::size_t n_microstrips, std::size_t elements_per_microstrip,
           std::vector<double> phases);

  /// b_l = e^{j phi_l}; entries are renormalized, so any nonzero vector works.
  static DmaState from_circle(std::size_t n_microstrips,
                              std::size_t elements_per_microstrip,
                              const ComplexVector& b);

  std::size_t microstrips() const { return n_microstrips_; }
  std::size_t elements_per_microstrip() const { return n_elements_; }
  std::size_t element_count() const { return phases_.size(); }

  const std::vector<double>& phases() const { return phases_; }
  double phase(std::size_t microstrip, std::size_t element) const {
    return phases_[microstrip * n_elements_ + element];
  }

  /// q-bar: all N weights in flat order.
  ComplexVector weights() const;
  /// b = 2 q-bar - j 1.
  ComplexVector circle_point() const;

  /// Q w, length N. Throws on a length mismatch.
  ComplexVector apply(const ComplexVector& w) const;
  /// Q^H v, length N_d.
  ComplexVector apply_adjoint(const ComplexVector& v) const;

 private:
  std::size_t n_microstrips_;
  std::size_t n_elements_;
  std::vector<double> phases_;
};

inline ComplexVector b_from_q(const ComplexVector& q) {
  return 2.0 * q - ComplexVector::Constant(q.size(), kImagUnit);
}

inline ComplexVector q_from_b(const ComplexVector& b) {
  return 0.5 * (b + ComplexVector::Constant(b.size(), kImagUnit));
}

/// z-bar_m with z-bar_m^H q-bar = a_m^H H Q w for every feasible q-bar.
/// Entry (i, l) is conj(w_i) conj(h_il) a_il.
std::vector<ComplexVector> reduced_channels(const ComplexVector& w,
                                            std::span<const ChannelVector> channels,
                                            const WaveguideMatrix& waveguide,
                                            std::size_t elements_per_microstrip);

/// A = -sum_m c_m z_m z_m^H with c_m = zeta * alpha_m, kept in factored form.
/// Negative semidefinite with rank <= M.
class QuadraticForm {
 public:
  QuadraticForm(std::vector<ComplexVector> factors, std::vector<double> coefficients);

  std::size_t dimension() const { return dimension_; }
  std::size_t rank_bound() const { return factors_.size(); }
  const std::vector<ComplexVector>& factors() const { return factors_; }
  const std::vector<double>& coefficients() const { return coefficients_; }

  /// A x through the low-rank factors.
  ComplexVector apply(const ComplexVector& x) const;
  /// x^H A x = -sum c_m |z_m^H x|^2 (real, <= 0).
  double value(const ComplexVector& x) const;
  /// A 1, cached at construction.
  const ComplexVector& ones_image() const { return ones_image_; }
  /// trace(-A) = sum c_m ||z_m||^2.
  double trace_magnitude() const { return trace_magnitude_; }
  bool is_zero() const { return trace_magnitude_ == 0.0; }

 private:
  std::size_t dimension_ = 0;
  std::vector<ComplexVector> factors_;
  std::vector<double> coefficients_;
  ComplexVector ones_image_;
  double trace_magnitude_ = 0.0;
};

QuadraticForm build_quadratic_form(std::vector<ComplexVector> reduced,
                                   std::span<const double> weights, double zeta);

}  // namespace nfwpt
