#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "nfwpt/alternating_solver.hpp"
#include "nfwpt/dma.hpp"
#include "nfwpt/precoder.hpp"
#include "nfwpt/scenario.hpp"

namespace nfwpt {

/// Malformed or invalid configuration. `line()` is 1-based, 0 when unknown.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& message, std::size_t line = 0);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Scenario schema:
// { "frequency_hz", "aperture_m", "spacing_fraction"?, "alpha_c", "beta_c",
//   "boresight_b", "p_max_w", "zeta",
//   "receivers": [ { "position_m": [x, y, z], "weight" } ] }

Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const Scenario& scenario);
/// Parses and validates; errors carry the offending line where one exists.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

/// { "n_d", "n_e", "phases_rad": [[...], ...] } with one row per microstrip.
nlohmann::json dma_to_json(const DmaState& state);
DmaState dma_from_json(const nlohmann::json& j);

/// [[re, im], ...]
nlohmann::json precoder_to_json(const Precoder& precoder);
Precoder precoder_from_json(const nlohmann::json& j);

nlohmann::json solver_options_to_json(const SolverOptions& options);

/// Report JSON: energies_w, objective, objective_trace, restarts, phases,
/// precoder, status and config_echo.
nlohmann::json report_to_json(const Solution& solution, const nlohmann::json& config_echo);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace nfwpt
