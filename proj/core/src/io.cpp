#include "nfwpt/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace nfwpt {

ConfigError::ConfigError(const std::string& message, std::size_t line)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + message : message),
      line_(line) {}

namespace {

using nlohmann::json;

// Schema violation tied to a key; parse_scenario() turns it into a line number.
struct FieldError {
  std::string key;
  std::size_t occurrence;  // 0-based among identical keys in document order
  std::string message;
};

std::size_t line_at(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

std::size_t line_of_key(std::string_view text, const std::string& key, std::size_t occurrence) {
  const std::string needle = "\"" + key + "\"";
  std::size_t pos = 0;
  for (std::size_t seen = 0;; ++seen, ++pos) {
    pos = text.find(needle, pos);
    if (pos == std::string_view::npos) return 1;
    if (seen == occurrence) return line_at(text, pos);
  }
}

double number(const json& j, const char* key, std::size_t occurrence = 0) {
  const auto it = j.find(key);
  if (it == j.end()) throw FieldError{key, occurrence, std::string("missing field \"") + key + "\""};
  if (!it->is_number())
    throw FieldError{key, occurrence, std::string("field \"") + key + "\" must be a number"};
  return it->get<double>();
}

Scenario scenario_from_json_impl(const json& j) {
  if (!j.is_object()) throw FieldError{"", 0, "scenario must be a JSON object"};
  GeometryParams params;
  params.frequency_hz = number(j, "frequency_hz");
  params.aperture_m = number(j, "aperture_m");
  if (j.contains("spacing_fraction")) params.spacing_fraction = number(j, "spacing_fraction");
  params.alpha_c = number(j, "alpha_c");
  params.beta_c = number(j, "beta_c");
  params.boresight_b = number(j, "boresight_b");

  const auto rx = j.find("receivers");
  if (rx == j.end()) throw FieldError{"receivers", 0, "missing field \"receivers\""};
  if (!rx->is_array()) throw FieldError{"receivers", 0, "\"receivers\" must be an array"};

  std::vector<Receiver> receivers;
  for (std::size_t m = 0; m < rx->size(); ++m) {
    const json& r = (*rx)[m];
    if (!r.is_object()) throw FieldError{"receivers", 0, "receiver entries must be objects"};
    const auto pos = r.find("position_m");
    if (pos == r.end() || !pos->is_array() || pos->size() != 3 ||
        !std::all_of(pos->begin(), pos->end(), [](const json& v) { return v.is_number(); }))
      throw FieldError{"position_m", m,
                       "receiver " + std::to_string(m) + ": \"position_m\" must be [x, y, z]"};
    Receiver receiver;
    receiver.position = {(*pos)[0].get<double>(), (*pos)[1].get<double>(),
                         (*pos)[2].get<double>()};
    receiver.weight = number(r, "weight", m);
    receivers.push_back(receiver);
  }

  double p_max = number(j, "p_max_w");
  double zeta = number(j, "zeta");

  SystemGeometry geometry = [&] {
    try {
      return build_geometry(params);
    } catch (const std::invalid_argument& e) {
      throw FieldError{"frequency_hz", 0, e.what()};
    }
  }();
  Scenario scenario{std::move(geometry), std::move(receivers), p_max, zeta};
  try {
    validate(scenario);
  } catch (const std::invalid_argument& e) {
    const std::string what = e.what();
    // "receiver <m>: weight ..." or "receiver <m>: position ..." point at that entry.
    std::string key = "zeta";
    std::size_t occurrence = 0;
    if (what.rfind("receiver ", 0) == 0) {
      occurrence = std::stoul(what.substr(9));
      key = what.find(": weight") != std::string::npos ? "weight" : "position_m";
    } else if (what.find("receiver") != std::string::npos) {
      key = "receivers";
    } else if (what.rfind("p_max_w", 0) == 0) {
      key = "p_max_w";
    }
    throw FieldError{key, occurrence, what};
  }
  return scenario;
}

}  // namespace

Scenario scenario_from_json(const json& j) {
  try {
    return scenario_from_json_impl(j);
  } catch (const FieldError& e) {
    throw ConfigError(e.message);
  }
}

Scenario parse_scenario(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what(),
                      line_at(text, e.byte > 0 ? e.byte - 1 : 0));
  }
  try {
    return scenario_from_json_impl(j);
  } catch (const FieldError& e) {
    throw ConfigError(e.message, e.key.empty() ? 1 : line_of_key(text, e.key, e.occurrence));
  }
}

Scenario load_scenario(const std::filesystem::path& path) {
  try {
    return parse_scenario(read_text(path));
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

json scenario_to_json(const Scenario& s) {
  const auto& p = s.geometry.params();
  json receivers = json::array();
  for (const auto& r : s.receivers)
    receivers.push_back({{"position_m", {r.position.x, r.position.y, r.position.z}},
                         {"weight", r.weight}});
  return {{"frequency_hz", p.frequency_hz},
          {"aperture_m", p.aperture_m},
          {"spacing_fraction", p.spacing_fraction},
          {"alpha_c", p.alpha_c},
          {"beta_c", p.beta_c},
          {"boresight_b", p.boresight_b},
          {"p_max_w", s.p_max_w},
          {"zeta", s.zeta},
          {"receivers", receivers}};
}

json dma_to_json(const DmaState& state) {
  json rows = json::array();
  for (std::size_t i = 0; i < state.microstrips(); ++i) {
    json row = json::array();
    for (std::size_t l = 0; l < state.elements_per_microstrip(); ++l)
      row.push_back(state.phase(i, l));
    rows.push_back(std::move(row));
  }
  return {{"n_d", state.microstrips()},
          {"n_e", state.elements_per_microstrip()},
          {"phases_rad", std::move(rows)}};
}

DmaState dma_from_json(const json& j) {
  try {
    const auto nd = j.at("n_d").get<std::size_t>();
    const auto ne = j.at("n_e").get<std::size_t>();
    const json& rows = j.at("phases_rad");
    if (!rows.is_array() || rows.size() != nd)
      throw ConfigError("phases_rad must have n_d rows");
    std::vector<double> phases;
    phases.reserve(nd * ne);
    for (const json& row : rows) {
      if (!row.is_array() || row.size() != ne) throw ConfigError("phases_rad rows must have n_e entries");
      for (const json& v : row) phases.push_back(v.get<double>());
    }
    return DmaState(nd, ne, std::move(phases));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("DMA configuration: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("DMA configuration: ") + e.what());
  }
}

json precoder_to_json(const Precoder& precoder) {
  json out = json::array();
  for (Eigen::Index i = 0; i < precoder.w.size(); ++i)
    out.push_back({precoder.w[i].real(), precoder.w[i].imag()});
  return out;
}

Precoder precoder_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ConfigError("precoder must be a non-empty array");
  Precoder p{ComplexVector(static_cast<Eigen::Index>(j.size()))};
  for (std::size_t i = 0; i < j.size(); ++i) {
    const json& e = j[i];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      throw ConfigError("precoder entries must be [re, im] pairs");
    p.w[static_cast<Eigen::Index>(i)] = {e[0].get<double>(), e[1].get<double>()};
  }
  return p;
}

json solver_options_to_json(const SolverOptions& o) {
  return {{"outer_iterations", o.outer_iterations},
          {"relative_tolerance", o.relative_tolerance},
          {"restarts", o.restarts},
          {"seed", o.seed},
          {"eigen", {{"tolerance", o.eigen.tolerance}, {"max_iterations", o.eigen.max_iterations}}},
          {"rcg",
           {{"max_iterations", o.rcg.max_iterations},
            {"gradient_tolerance", o.rcg.gradient_tolerance},
            {"initial_step", o.rcg.initial_step},
            {"contraction", o.rcg.contraction},
            {"sufficient_decrease", o.rcg.sufficient_decrease},
            {"max_backtracks", o.rcg.max_backtracks},
            {"restart_period", o.rcg.restart_period}}}};
}

json report_to_json(const Solution& solution, const json& config_echo) {
  const auto& r = solution.report;
  json restarts = json::array();
  for (const auto& t : r.restarts)
    restarts.push_back({{"objective_trace", t.objective},
                        {"final_objective", t.final_objective},
                        {"converged", t.converged}});
  return {{"status", std::string(to_string(r.status))},
          {"energies_w", r.energies_w},
          {"objective", r.objective},
          {"objective_trace", r.objective_trace()},
          {"chosen_restart", r.chosen_restart},
          {"restarts", std::move(restarts)},
          {"phases", dma_to_json(solution.dma)},
          {"precoder", precoder_to_json(solution.precoder)},
          {"config_echo", config_echo}};
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace nfwpt
