#pragma once

#include <ostream>
#include <span>
#include <vector>

#include "nfwpt/scenario.hpp"
#include "nfwpt/types.hpp"

namespace nfwpt {

/// Element radiation pattern: 2(b+1) cos^b(theta) on [0, pi/2], zero elsewhere.
double radiation_profile(double theta, double b);

/// Free-space near-field channel from every aperture element to one point.
///
/// Entry n stores A_n e^{+jk d_n}, so that the received signal a^H r carries
/// the propagation phase e^{-jk d_n}. Ordering is the shared flat index.
struct ChannelVector {
  ComplexVector entries;
  Point3 position;

  double gain() const { return entries.squaredNorm(); }
};

/// Throws std::invalid_argument if the point coincides with an element.
ChannelVector channel_vector(const SystemGeometry& geometry, const Point3& point);

std::vector<ChannelVector> channel_vectors(const SystemGeometry& geometry,
                                           std::span<const Receiver> receivers);

/// Diagonal in-waveguide propagation matrix H, h = exp(-rho (alpha_c + j beta_c))
/// with rho = l * spacing measured from the feed at element 0.
class WaveguideMatrix {
 public:
  explicit WaveguideMatrix(const SystemGeometry& geometry);

  std::size_t size() const { return static_cast<std::size_t>(diagonal_.size()); }
  const ComplexVector& diagonal() const { return diagonal_; }
  Complex operator()(std::size_t flat) const { return diagonal_[static_cast<Eigen::Index>(flat)]; }

  ComplexVector apply(const ComplexVector& v) const { return diagonal_.cwiseProduct(v); }
  ComplexVector apply_adjoint(const ComplexVector& v) const {
    return diagonal_.conjugate().cwiseProduct(v);
  }

 private:
  ComplexVector diagonal_;
};

inline WaveguideMatrix waveguide_matrix(const SystemGeometry& geometry) {
  return WaveguideMatrix(geometry);
}

/// Debug export: header `index,real,imag`, one row per element.
void write_channel_csv(std::ostream& out, const ChannelVector& channel);

}  // namespace nfwpt
