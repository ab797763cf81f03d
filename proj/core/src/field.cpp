#include "nfwpt/field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "nfwpt/propagation.hpp"

namespace nfwpt {

double AxisRange::at(std::size_t index) const {
  if (points < 2) return min;
  return min + (max - min) * static_cast<double>(index) / static_cast<double>(points - 1);
}

std::string_view axis_names(Plane plane, int which) {
  switch (plane) {
    case Plane::XZ: return which == 0 ? "x" : "z";
    case Plane::YZ: return which == 0 ? "y" : "z";
    case Plane::XY: return which == 0 ? "x" : "y";
  }
  return "?";
}

Point3 GridSpec::point(std::size_t i, std::size_t j) const {
  const double a = first.at(i);
  const double b = second.at(j);
  switch (plane) {
    case Plane::XZ: return {a, offset, b};
    case Plane::YZ: return {offset, a, b};
    case Plane::XY: return {a, b, offset};
  }
  return {};
}

void validate(const GridSpec& spec) {
  for (const AxisRange* axis : {&spec.first, &spec.second}) {
    if (!std::isfinite(axis->min) || !std::isfinite(axis->max))
      throw std::invalid_argument("grid: axis range must be finite");
    if (axis->points < 2) throw std::invalid_argument("grid: at least 2 points per axis");
  }
  if (!std::isfinite(spec.offset)) throw std::invalid_argument("grid: offset must be finite");
}

FieldEvaluator::FieldEvaluator(const Scenario& scenario, const DmaState& state,
                               const Precoder& precoder)
    : scenario_(scenario),
      radiated_(radiated_signal(state, WaveguideMatrix(scenario.geometry), precoder.w)) {
  if (state.element_count() != scenario.geometry.element_count())
    throw std::invalid_argument("FieldEvaluator: DMA state does not match the geometry");
}

FieldEvaluator::Sample FieldEvaluator::sample(const Point3& point) const {
  // Same entries as channel_vector(), accumulated without materializing a(p).
  const ChannelVector a = channel_vector(scenario_.geometry, point);
  return {a.entries.dot(radiated_), a.entries.squaredNorm()};
}

double FieldEvaluator::received_power(const Point3& point) const {
  return scenario_.zeta * std::norm(sample(point).response);
}

FieldEvaluator::Normalized FieldEvaluator::normalized_power(const Point3& point) const {
  const Sample s = sample(point);
  if (!(s.gain > 0.0)) return {0.0, true};
  return {std::norm(s.response) / s.gain, false};
}

PowerGrid evaluate_grid(const FieldEvaluator& field, const GridSpec& spec) {
  validate(spec);
  PowerGrid grid;
  grid.spec = spec;
  grid.power_w.resize(spec.size());
  grid.normalized.resize(spec.size());

  const double zeta = field.scenario().zeta;
  const std::size_t n1 = spec.first.points;
  for (std::size_t j = 0; j < spec.second.points; ++j) {
    for (std::size_t i = 0; i < n1; ++i) {
      const std::size_t k = j * n1 + i;
      const ChannelVector a = channel_vector(field.scenario().geometry, spec.point(i, j));
      const double response = std::norm(a.entries.dot(field.radiated()));
      const double gain = a.entries.squaredNorm();
      grid.power_w[k] = zeta * response;
      grid.normalized[k] = gain > 0.0 ? response / gain : 0.0;
    }
  }

  const auto peak = std::max_element(grid.normalized.begin(), grid.normalized.end());
  grid.peak_index = static_cast<std::size_t>(peak - grid.normalized.begin());
  grid.peak_normalized = *peak;
  grid.peak_location = spec.point(grid.peak_index % n1, grid.peak_index / n1);
  if (grid.peak_normalized > 0.0)
    for (double& v : grid.normalized) v /= grid.peak_normalized;
  return grid;
}

double PowerGrid::spot_fraction() const {
  if (normalized.empty()) return 0.0;
  const auto hot = std::count_if(normalized.begin(), normalized.end(),
                                 [](double v) { return v >= 0.5; });
  return static_cast<double>(hot) / static_cast<double>(normalized.size());
}

namespace {

double to_db(double normalized) {
  if (!(normalized > 0.0)) return kDbFloor;
  return std::max(10.0 * std::log10(normalized), kDbFloor);
}

struct ColumnStats {
  double min = 0.0;
  double max = 0.0;
  std::size_t argmin = 0;
  std::size_t argmax = 0;
};

template <typename Get>
ColumnStats column_stats(std::size_t n, Get get) {
  ColumnStats s{get(0), get(0), 0, 0};
  for (std::size_t k = 1; k < n; ++k) {
    const double v = get(k);
    if (v < s.min) { s.min = v; s.argmin = k; }
    if (v > s.max) { s.max = v; s.argmax = k; }
  }
  return s;
}

nlohmann::json stats_json(const ColumnStats& s) {
  return {{"min", s.min}, {"max", s.max}, {"argmin", s.argmin}, {"argmax", s.argmax}};
}

std::string_view plane_name(Plane plane) {
  switch (plane) {
    case Plane::XZ: return "xz";
    case Plane::YZ: return "yz";
    case Plane::XY: return "xy";
  }
  return "?";
}

}  // namespace

void write_grid_csv(std::ostream& out, const PowerGrid& grid) {
  const auto& spec = grid.spec;
  out << axis_names(spec.plane, 0) << "_m," << axis_names(spec.plane, 1)
      << "_m,power_w,normalized,norm_db\n";
  char buf[160];
  const std::size_t n1 = spec.first.points;
  for (std::size_t k = 0; k < grid.normalized.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", spec.first.at(k % n1),
                  spec.second.at(k / n1), grid.power_w[k], grid.normalized[k],
                  to_db(grid.normalized[k]));
    out << buf;
  }
}

nlohmann::json grid_sidecar(const PowerGrid& grid) {
  const auto& spec = grid.spec;
  const std::size_t n = grid.normalized.size();
  const auto axis = [&](const AxisRange& r, int which) {
    return nlohmann::json{{"name", std::string(axis_names(spec.plane, which))},
                          {"min_m", r.min}, {"max_m", r.max}, {"points", r.points}};
  };
  nlohmann::json j;
  j["plane"] = std::string(plane_name(spec.plane));
  j["offset_m"] = spec.offset;
  j["axes"] = {axis(spec.first, 0), axis(spec.second, 1)};
  j["rows"] = n;
  j["row_order"] = "second axis outer, first axis inner";
  j["normalization"] =
      "normalized = (|a(p)^H H Q w|^2 / ||a(p)||^2) / grid peak; norm_db = 10 log10(normalized)";
  j["db_floor"] = kDbFloor;
  j["peak"] = {{"index", grid.peak_index},
               {"normalized_unscaled", grid.peak_normalized},
               {"power_w", n ? grid.power_w[grid.peak_index] : 0.0},
               {"location_m", {grid.peak_location.x, grid.peak_location.y, grid.peak_location.z}}};
  j["spot_fraction"] = grid.spot_fraction();
  if (n > 0) {
    j["stats"] = {
        {"power_w", stats_json(column_stats(n, [&](std::size_t k) { return grid.power_w[k]; }))},
        {"normalized",
         stats_json(column_stats(n, [&](std::size_t k) { return grid.normalized[k]; }))},
        {"norm_db",
         stats_json(column_stats(n, [&](std::size_t k) { return to_db(grid.normalized[k]); }))}};
  }
  return j;
}

}  // namespace nfwpt
