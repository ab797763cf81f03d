#include "nfwpt/dma.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nfwpt {

double wrap_phase(double phase) {
  double r = std::fmod(phase, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // fmod of a tiny negative value can round up to exactly 2 pi.
  if (r >= kTwoPi) r = 0.0;
  return r;
}

DmaState::DmaState(std::size_t n_microstrips, std::size_t elements_per_microstrip,
                   std::vector<double> phases)
    : n_microstrips_(n_microstrips), n_elements_(elements_per_microstrip),
      phases_(std::move(phases)) {
  if (n_microstrips == 0 || elements_per_microstrip == 0 ||
      phases_.size() != n_microstrips * elements_per_microstrip)
    throw std::invalid_argument("DmaState: expected " + std::to_string(n_microstrips) + "x" +
                                std::to_string(elements_per_microstrip) + " phases, got " +
                                std::to_string(phases_.size()));
  for (double& p : phases_) {
    if (!std::isfinite(p)) throw std::invalid_argument("DmaState: non-finite phase");
    p = wrap_phase(p);
  }
}

DmaState DmaState::from_circle(std::size_t n_microstrips, std::size_t elements_per_microstrip,
                               const ComplexVector& b) {
  std::vector<double> phases(static_cast<std::size_t>(b.size()));
  for (Eigen::Index l = 0; l < b.size(); ++l) phases[static_cast<std::size_t>(l)] = std::arg(b[l]);
  return DmaState(n_microstrips, elements_per_microstrip, std::move(phases));
}

ComplexVector DmaState::weights() const {
  ComplexVector q(static_cast<Eigen::Index>(phases_.size()));
  for (std::size_t n = 0; n < phases_.size(); ++n)
    q[static_cast<Eigen::Index>(n)] = lorentzian_weight(phases_[n]);
  return q;
}

ComplexVector DmaState::circle_point() const {
  ComplexVector b(static_cast<Eigen::Index>(phases_.size()));
  for (std::size_t n = 0; n < phases_.size(); ++n)
    b[static_cast<Eigen::Index>(n)] = std::polar(1.0, phases_[n]);
  return b;
}

ComplexVector DmaState::apply(const ComplexVector& w) const {
  if (static_cast<std::size_t>(w.size()) != n_microstrips_)
    throw std::invalid_argument("DmaState::apply: precoder length mismatch");
  ComplexVector out(static_cast<Eigen::Index>(element_count()));
  for (std::size_t i = 0; i < n_microstrips_; ++i) {
    const Complex wi = w[static_cast<Eigen::Index>(i)];
    for (std::size_t l = 0; l < n_elements_; ++l) {
      const std::size_t n = i * n_elements_ + l;
      out[static_cast<Eigen::Index>(n)] = lorentzian_weight(phases_[n]) * wi;
    }
  }
  return out;
}

ComplexVector DmaState::apply_adjoint(const ComplexVector& v) const {
  if (static_cast<std::size_t>(v.size()) != element_count())
    throw std::invalid_argument("DmaState::apply_adjoint: length mismatch");
  ComplexVector out = ComplexVector::Zero(static_cast<Eigen::Index>(n_microstrips_));
  for (std::size_t i = 0; i < n_microstrips_; ++i) {
    Complex acc{0.0, 0.0};
    for (std::size_t l = 0; l < n_elements_; ++l) {
      const std::size_t n = i * n_elements_ + l;
      acc += std::conj(lorentzian_weight(phases_[n])) * v[static_cast<Eigen::Index>(n)];
    }
    out[static_cast<Eigen::Index>(i)] = acc;
  }
  return out;
}

std::vector<ComplexVector> reduced_channels(const ComplexVector& w,
                                            std::span<const ChannelVector> channels,
                                            const WaveguideMatrix& waveguide,
                                            std::size_t elements_per_microstrip) {
  const auto n = static_cast<Eigen::Index>(waveguide.size());
  if (elements_per_microstrip == 0 ||
      static_cast<std::size_t>(w.size()) * elements_per_microstrip != waveguide.size())
    throw std::invalid_argument("reduced_channels: precoder length does not match the aperture");

  // Conjugated precoder expanded over each microstrip's elements.
  ComplexVector w_expanded(n);
  for (Eigen::Index idx = 0; idx < n; ++idx)
    w_expanded[idx] = std::conj(w[idx / static_cast<Eigen::Index>(elements_per_microstrip)]);

  std::vector<ComplexVector> out;
  out.reserve(channels.size());
  for (const auto& a : channels) {
    if (a.entries.size() != n)
      throw std::invalid_argument("reduced_channels: channel length mismatch");
    out.push_back(w_expanded.cwiseProduct(waveguide.apply_adjoint(a.entries)));
  }
  return out;
}

QuadraticForm::QuadraticForm(std::vector<ComplexVector> factors, std::vector<double> coefficients)
    : factors_(std::move(factors)), coefficients_(std::move(coefficients)) {
  if (factors_.size() != coefficients_.size())
    throw std::invalid_argument("QuadraticForm: factor/coefficient count mismatch");
  if (factors_.empty()) throw std::invalid_argument("QuadraticForm: no factors");
  dimension_ = static_cast<std::size_t>(factors_.front().size());
  for (std::size_t m = 0; m < factors_.size(); ++m) {
    if (static_cast<std::size_t>(factors_[m].size()) != dimension_)
      throw std::invalid_argument("QuadraticForm: factor dimension mismatch");
    if (!(coefficients_[m] >= 0.0))
      throw std::invalid_argument("QuadraticForm: coefficients must be >= 0");
    trace_magnitude_ += coefficients_[m] * factors_[m].squaredNorm();
  }
  ones_image_ = apply(ComplexVector::Ones(static_cast<Eigen::Index>(dimension_)));
}

ComplexVector QuadraticForm::apply(const ComplexVector& x) const {
  ComplexVector out = ComplexVector::Zero(static_cast<Eigen::Index>(dimension_));
  for (std::size_t m = 0; m < factors_.size(); ++m) {
    if (coefficients_[m] == 0.0) continue;
    // Eigen's dot conjugates the left operand: z^H x.
    out -= (coefficients_[m] * factors_[m].dot(x)) * factors_[m];
  }
  return out;
}

double QuadraticForm::value(const ComplexVector& x) const {
  double acc = 0.0;
  for (std::size_t m = 0; m < factors_.size(); ++m)
    acc -= coefficients_[m] * std::norm(factors_[m].dot(x));
  return acc;
}

QuadraticForm build_quadratic_form(std::vector<ComplexVector> reduced,
                                   std::span<const double> weights, double zeta) {
  if (reduced.size() != weights.size())
    throw std::invalid_argument("build_quadratic_form: one weight per receiver required");
  std::vector<double> coefficients;
  coefficients.reserve(weights.size());
  for (double alpha : weights) coefficients.push_back(zeta * alpha);
  return QuadraticForm(std::move(reduced), std::move(coefficients));
}

}  // namespace nfwpt
