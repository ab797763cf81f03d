#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "nfwpt/types.hpp"

namespace nfwpt {

inline constexpr double kSpeedOfLight = 2.998e8;  // m/s

/// Inputs to build_geometry(). Defaults are the 28 GHz, 30 cm aperture
/// configuration with lambda/2 spacing and a dipole-like element pattern.
struct GeometryParams {
  double frequency_hz = 28e9;
  double aperture_m = 0.3;
  double spacing_fraction = 0.5;  ///< element spacing in wavelengths
  double alpha_c = 1.2;           ///< waveguide attenuation, 1/m
  double beta_c = 827.67;         ///< waveguide propagation constant, rad/m
  double boresight_b = 2.0;       ///< element pattern exponent
};

/// Planar DMA aperture: N_d microstrips along x, each carrying N_e elements
/// along y, centered on the origin in the z = 0 plane.
///
/// Element (i, l) uses 0-based indices here; its flat index is i * N_e + l
/// (microstrip-major). Every module shares this ordering.
class SystemGeometry {
 public:
  SystemGeometry(const GeometryParams& params, std::size_t n_microstrips,
                 std::size_t elements_per_microstrip);

  const GeometryParams& params() const { return params_; }
  double frequency() const { return params_.frequency_hz; }
  double wavelength() const { return wavelength_; }
  double wavenumber() const { return wavenumber_; }
  double aperture() const { return params_.aperture_m; }
  double spacing() const { return spacing_; }
  double alpha_c() const { return params_.alpha_c; }
  double beta_c() const { return params_.beta_c; }
  double boresight_gain() const { return params_.boresight_b; }

  std::size_t microstrips() const { return n_microstrips_; }
  std::size_t elements_per_microstrip() const { return n_elements_; }
  std::size_t element_count() const { return n_microstrips_ * n_elements_; }

  std::size_t flat_index(std::size_t microstrip, std::size_t element) const {
    return microstrip * n_elements_ + element;
  }
  Point3 element_position(std::size_t microstrip, std::size_t element) const;
  Point3 element_position(std::size_t flat) const {
    return element_position(flat / n_elements_, flat % n_elements_);
  }

 private:
  GeometryParams params_;
  std::size_t n_microstrips_;
  std::size_t n_elements_;
  double wavelength_;
  double wavenumber_;
  double spacing_;
};

/// Derives N_d = N_e = floor(2D / lambda) from the aperture side D.
/// Throws std::invalid_argument on non-positive inputs or when the aperture
/// is too small to hold a single element.
SystemGeometry build_geometry(const GeometryParams& params);

/// 2 D^2 / lambda.
double fraunhofer_distance(const SystemGeometry& geometry);
/// (D^4 / (8 lambda))^(1/3).
double fresnel_limit(const SystemGeometry& geometry);

enum class FieldRegion { Reactive, RadiatingNearField, FarField };

std::string_view to_string(FieldRegion region);

/// Classifies by distance from the aperture center. Both boundaries belong to
/// the radiating near-field.
FieldRegion classify_region(const SystemGeometry& geometry, const Point3& point);

struct Receiver {
  Point3 position;
  double weight = 1.0;
};

struct Scenario {
  SystemGeometry geometry;
  std::vector<Receiver> receivers;
  double p_max_w = 1.0;
  double zeta = 0.5;

  std::vector<double> weights() const;
};

/// Throws std::invalid_argument when any scenario invariant is violated:
/// no receivers, negative weight, receiver not in front of the aperture,
/// P_max <= 0, or zeta outside (0, 1).
void validate(const Scenario& scenario);

}  // namespace nfwpt
