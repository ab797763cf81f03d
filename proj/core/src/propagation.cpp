#include "nfwpt/propagation.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace nfwpt {

double radiation_profile(double theta, double b) {
  if (theta < 0.0 || theta > 0.5 * kPi) return 0.0;
  return 2.0 * (b + 1.0) * std::pow(std::cos(theta), b);
}

namespace {

// Same profile from cos(theta) directly; avoids an acos round trip and keeps
// theta = pi/2 exactly zero for b > 0.
double profile_from_cosine(double cos_theta, double b) {
  if (cos_theta < 0.0) return 0.0;
  return 2.0 * (b + 1.0) * std::pow(cos_theta, b);
}

}  // namespace

ChannelVector channel_vector(const SystemGeometry& geometry, const Point3& point) {
  const std::size_t n = geometry.element_count();
  const double lambda = geometry.wavelength();
  const double k = geometry.wavenumber();
  const double b = geometry.boresight_gain();

  ChannelVector out{ComplexVector(static_cast<Eigen::Index>(n)), point};
  for (std::size_t idx = 0; idx < n; ++idx) {
    const double d = distance(point, geometry.element_position(idx));
    if (!(d > 0.0))
      throw std::invalid_argument("channel_vector: point coincides with element " +
                                  std::to_string(idx));
    const double amplitude = std::sqrt(profile_from_cosine(point.z / d, b)) * lambda /
                             (4.0 * kPi * d);
    out.entries[static_cast<Eigen::Index>(idx)] = std::polar(amplitude, k * d);
  }
  return out;
}

std::vector<ChannelVector> channel_vectors(const SystemGeometry& geometry,
                                           std::span<const Receiver> receivers) {
  std::vector<ChannelVector> out;
  out.reserve(receivers.size());
  for (const auto& r : receivers) out.push_back(channel_vector(geometry, r.position));
  return out;
}

WaveguideMatrix::WaveguideMatrix(const SystemGeometry& geometry)
    : diagonal_(static_cast<Eigen::Index>(geometry.element_count())) {
  const Complex gamma{geometry.alpha_c(), geometry.beta_c()};
  for (std::size_t i = 0; i < geometry.microstrips(); ++i) {
    for (std::size_t l = 0; l < geometry.elements_per_microstrip(); ++l) {
      const double rho = static_cast<double>(l) * geometry.spacing();
      diagonal_[static_cast<Eigen::Index>(geometry.flat_index(i, l))] = std::exp(-rho * gamma);
    }
  }
}

void write_channel_csv(std::ostream& out, const ChannelVector& channel) {
  out << "index,real,imag\n";
  char buf[96];
  for (Eigen::Index i = 0; i < channel.entries.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%ld,%.17g,%.17g\n", static_cast<long>(i),
                  channel.entries[i].real(), channel.entries[i].imag());
    out << buf;
  }
}

}  // namespace nfwpt
