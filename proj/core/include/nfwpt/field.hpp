#pragma once

#include <cstddef>
#include <ostream>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "nfwpt/dma.hpp"
#include "nfwpt/precoder.hpp"
#include "nfwpt/scenario.hpp"

namespace nfwpt {

struct AxisRange {
  double min = 0.0;
  double max = 1.0;
  std::size_t points = 2;

  double at(std::size_t index) const;
};

enum class Plane { XZ, YZ, XY };

std::string_view axis_names(Plane plane, int which);

struct GridSpec {
  Plane plane = Plane::XZ;
  double offset = 0.0;  ///< fixed coordinate of the remaining axis
  AxisRange first{-1.0, 1.0, 201};
  AxisRange second{0.5, 3.0, 251};

  std::size_t size() const { return first.points * second.points; }
  Point3 point(std::size_t first_index, std::size_t second_index) const;
};

/// Throws std::invalid_argument on non-finite ranges or fewer than 2 points.
void validate(const GridSpec& spec);

/// Fixed transmit configuration evaluated at arbitrary points. Caches the
/// radiated signal H Q w.
class FieldEvaluator {
 public:
  FieldEvaluator(const Scenario& scenario, const DmaState& state, const Precoder& precoder);

  /// zeta |a(p)^H H Q w|^2 in W.
  double received_power(const Point3& point) const;

  struct Normalized {
    double value = 0.0;
    bool zero_channel = false;
  };
  /// |a(p)^H H Q w|^2 / ||a(p)||^2; zero with a flag where the channel vanishes.
  Normalized normalized_power(const Point3& point) const;

  const ComplexVector& radiated() const { return radiated_; }
  double radiated_power() const { return radiated_.squaredNorm(); }
  const Scenario& scenario() const { return scenario_; }

 private:
  struct Sample {
    Complex response;
    double gain;
  };
  Sample sample(const Point3& point) const;

  Scenario scenario_;
  ComplexVector radiated_;
};

struct PowerGrid {
  GridSpec spec;
  std::vector<double> power_w;     ///< raw received power
  std::vector<double> normalized;  ///< channel-gain-normalized, divided by its peak
  double peak_normalized = 0.0;    ///< peak before division
  std::size_t peak_index = 0;      ///< row-major: second axis outer, first axis inner
  Point3 peak_location;

  double at(std::size_t first_index, std::size_t second_index) const {
    return normalized[second_index * spec.first.points + first_index];
  }
  /// Fraction of points at or above half the peak.
  double spot_fraction() const;
};

PowerGrid evaluate_grid(const FieldEvaluator& field, const GridSpec& spec);

inline constexpr double kDbFloor = -300.0;

/// Header `<a>_m,<b>_m,power_w,normalized,norm_db`, rows ordered by the second
/// axis then the first. Values use %.17g so they parse back bit-exactly.
void write_grid_csv(std::ostream& out, const PowerGrid& grid);

/// Spec, peak, per-column min/max/argmax and normalization conventions.
nlohmann::json grid_sidecar(const PowerGrid& grid);

}  // namespace nfwpt
