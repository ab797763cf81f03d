#include "nfwpt/scenario.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nfwpt {

SystemGeometry::SystemGeometry(const GeometryParams& params, std::size_t n_microstrips,
                               std::size_t elements_per_microstrip)
    : params_(params),
      n_microstrips_(n_microstrips),
      n_elements_(elements_per_microstrip),
      wavelength_(kSpeedOfLight / params.frequency_hz),
      wavenumber_(kTwoPi / wavelength_),
      spacing_(params.spacing_fraction * wavelength_) {
  if (!(params.frequency_hz > 0.0) || !(params.spacing_fraction > 0.0))
    throw std::invalid_argument("geometry: frequency and spacing must be positive");
  if (n_microstrips == 0 || elements_per_microstrip == 0)
    throw std::invalid_argument("geometry: at least one element per axis is required");
}

Point3 SystemGeometry::element_position(std::size_t microstrip, std::size_t element) const {
  // Centered grid: 1-based index k maps to (k - (n + 1) / 2) * spacing.
  const double cx = 0.5 * static_cast<double>(n_microstrips_ - 1);
  const double cy = 0.5 * static_cast<double>(n_elements_ - 1);
  return {(static_cast<double>(microstrip) - cx) * spacing_,
          (static_cast<double>(element) - cy) * spacing_, 0.0};
}

SystemGeometry build_geometry(const GeometryParams& params) {
  if (!(params.frequency_hz > 0.0))
    throw std::invalid_argument("frequency_hz must be positive");
  if (!(params.aperture_m > 0.0)) throw std::invalid_argument("aperture_m must be positive");
  if (!(params.spacing_fraction > 0.0))
    throw std::invalid_argument("spacing_fraction must be positive");
  if (!std::isfinite(params.alpha_c) || !std::isfinite(params.beta_c) ||
      !std::isfinite(params.boresight_b))
    throw std::invalid_argument("waveguide and pattern constants must be finite");

  const double wavelength = kSpeedOfLight / params.frequency_hz;
  // A few ulps of slack so that lambda == 2D exactly still yields one element.
  const double ratio = 2.0 * params.aperture_m / wavelength;
  const double count = std::floor(ratio * (1.0 + 1e-12));
  if (count < 1.0)
    throw std::invalid_argument("aperture of " + std::to_string(params.aperture_m) +
                                " m holds no element at wavelength " +
                                std::to_string(wavelength) + " m");
  const auto n = static_cast<std::size_t>(count);
  return SystemGeometry(params, n, n);
}

double fraunhofer_distance(const SystemGeometry& geometry) {
  const double d = geometry.aperture();
  return 2.0 * d * d / geometry.wavelength();
}

double fresnel_limit(const SystemGeometry& geometry) {
  const double d = geometry.aperture();
  return std::cbrt(d * d * d * d / (8.0 * geometry.wavelength()));
}

std::string_view to_string(FieldRegion region) {
  switch (region) {
    case FieldRegion::Reactive: return "reactive";
    case FieldRegion::RadiatingNearField: return "radiating-near-field";
    case FieldRegion::FarField: return "far-field";
  }
  return "unknown";
}

FieldRegion classify_region(const SystemGeometry& geometry, const Point3& point) {
  const double r = point.norm();
  if (r < fresnel_limit(geometry)) return FieldRegion::Reactive;
  if (r > fraunhofer_distance(geometry)) return FieldRegion::FarField;
  return FieldRegion::RadiatingNearField;
}

std::vector<double> Scenario::weights() const {
  std::vector<double> out;
  out.reserve(receivers.size());
  for (const auto& r : receivers) out.push_back(r.weight);
  return out;
}

void validate(const Scenario& scenario) {
  if (scenario.receivers.empty())
    throw std::invalid_argument("scenario needs at least one receiver");
  for (std::size_t m = 0; m < scenario.receivers.size(); ++m) {
    const auto& r = scenario.receivers[m];
    const std::string tag = "receiver " + std::to_string(m) + ": ";
    if (!(r.weight >= 0.0) || !std::isfinite(r.weight))
      throw std::invalid_argument(tag + "weight must be finite and >= 0");
    if (!std::isfinite(r.position.x) || !std::isfinite(r.position.y) ||
        !(r.position.z > 0.0) || !std::isfinite(r.position.z))
      throw std::invalid_argument(tag + "position must be finite with z > 0");
  }
  if (!(scenario.p_max_w > 0.0) || !std::isfinite(scenario.p_max_w))
    throw std::invalid_argument("p_max_w must be positive");
  if (!(scenario.zeta > 0.0 && scenario.zeta < 1.0))
    throw std::invalid_argument("zeta must lie in (0, 1)");
}

}  // namespace nfwpt
