#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "nfwpt/io.hpp"
#include "nfwpt/propagation.hpp"

namespace nfwpt::cli {

namespace fs = std::filesystem;
using nlohmann::json;

EnvLookup process_environment() {
  return [](const std::string& name) -> std::optional<std::string> {
    if (const char* v = std::getenv(name.c_str())) return std::string(v);
    return std::nullopt;
  };
}

namespace {

constexpr const char* kEnvPrefix = "NFWPT_";

template <typename T>
T parse_number(const std::string& text, const std::string& what) {
  std::istringstream in(text);
  T value{};
  in >> value;
  if (!in || !(in >> std::ws).eof())
    throw ConfigError(what + ": cannot parse \"" + text + "\" as a number");
  return value;
}

template <typename T>
void override_from(const EnvLookup& env, const std::string& key, T& target) {
  const std::string name = kEnvPrefix + key;
  if (auto v = env(name)) target = parse_number<T>(*v, name);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

struct CommonArgs {
  std::string scenario;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> restarts;
  std::optional<int> outer_iterations;
  bool trace = false;
};

int exit_code_for(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return kOk;
    case SolveStatus::Unservable: return kUnservable;
    case SolveStatus::NotConverged: return kNotConverged;
  }
  return kNotConverged;
}

SolverOptions resolve_options(const CommonArgs& args, const EnvLookup& env) {
  SolverOptions options;
  apply_environment(options, env);
  if (args.seed) options.seed = *args.seed;
  if (args.restarts) options.restarts = *args.restarts;
  if (args.outer_iterations) options.outer_iterations = *args.outer_iterations;
  try {
    validate(options);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return options;
}

json derived_echo(const Scenario& s) {
  const auto& g = s.geometry;
  json regions = json::array();
  for (const auto& r : s.receivers)
    regions.push_back(std::string(to_string(classify_region(g, r.position))));
  return {{"speed_of_light_m_s", kSpeedOfLight},
          {"wavelength_m", g.wavelength()},
          {"wavenumber_rad_m", g.wavenumber()},
          {"element_spacing_m", g.spacing()},
          {"n_d", g.microstrips()},
          {"n_e", g.elements_per_microstrip()},
          {"n", g.element_count()},
          {"fraunhofer_distance_m", fraunhofer_distance(g)},
          {"fresnel_limit_m", fresnel_limit(g)},
          {"receiver_regions", regions}};
}

json config_echo(const Scenario& s, const SolverOptions& options) {
  return {{"scenario", scenario_to_json(s)},
          {"solver", solver_options_to_json(options)},
          {"seed", options.seed},
          {"derived", derived_echo(s)}};
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

void write_trace_csv(const fs::path& path, const SolverReport& report) {
  std::ostringstream os;
  os << "restart,outer,iteration,objective,gradient_norm\n";
  for (std::size_t r = 0; r < report.restarts.size(); ++r) {
    const auto& inner = report.restarts[r].inner;
    for (std::size_t t = 0; t < inner.size(); ++t)
      for (std::size_t k = 0; k < inner[t].objective.size(); ++k)
        os << r << ',' << t << ',' << k << ',' << format_double(inner[t].objective[k]) << ','
           << format_double(inner[t].gradient_norm[k]) << '\n';
  }
  write_text(path, os.str());
}

void print_summary(std::ostream& out, const Solution& solution) {
  const auto& r = solution.report;
  out << "status: " << to_string(r.status) << "\n";
  for (std::size_t m = 0; m < r.energies_w.size(); ++m)
    out << "E_" << (m + 1) << " = " << r.energies_w[m] * 1e6 << " uW\n";
  out << "objective = " << r.objective * 1e6 << " uW (restart " << r.chosen_restart << ", "
      << r.wall_time_s << " s)\n";
}

int cmd_solve(const CommonArgs& args, bool export_channels, std::ostream& out,
              const EnvLookup& env) {
  const Scenario scenario = load_scenario(args.scenario);
  const SolverOptions options = resolve_options(args, env);
  const fs::path dir(args.out_dir);
  fs::create_directories(dir);

  const Solution solution = solve(scenario, options);
  const json echo = config_echo(scenario, options);
  write_json(dir / "report.json", report_to_json(solution, echo));
  json dma = dma_to_json(solution.dma);
  dma["config_echo"] = echo;
  write_json(dir / "dma.json", dma);
  write_json(dir / "precoder.json", precoder_to_json(solution.precoder));
  if (args.trace) write_trace_csv(dir / "trace.csv", solution.report);
  if (export_channels) {
    const auto channels = channel_vectors(scenario.geometry, scenario.receivers);
    for (std::size_t m = 0; m < channels.size(); ++m) {
      std::ostringstream os;
      write_channel_csv(os, channels[m]);
      write_text(dir / ("channel_" + std::to_string(m + 1) + ".csv"), os.str());
    }
  }
  print_summary(out, solution);
  return exit_code_for(solution.report.status);
}

int cmd_grid(const CommonArgs& args, const std::string& solution_dir, const std::string& grid_x,
             const std::string& grid_z, std::ostream& out, const EnvLookup& env) {
  const Scenario scenario = load_scenario(args.scenario);
  GridSpec spec;
  if (!grid_x.empty()) spec.first = parse_axis(grid_x);
  if (!grid_z.empty()) spec.second = parse_axis(grid_z);

  json echo;
  int code = kOk;
  std::optional<Solution> solution;
  if (!solution_dir.empty()) {
    const fs::path src(solution_dir);
    DmaState dma = dma_from_json(json::parse(read_text(src / "dma.json")));
    Precoder precoder = precoder_from_json(json::parse(read_text(src / "precoder.json")));
    if (dma.element_count() != scenario.geometry.element_count() ||
        static_cast<std::size_t>(precoder.w.size()) != scenario.geometry.microstrips())
      throw ConfigError("solution in " + solution_dir + " does not match the scenario geometry");
    solution.emplace(Solution{std::move(dma), std::move(precoder), {}});
    echo = {{"scenario", scenario_to_json(scenario)},
            {"solution_dir", solution_dir},
            {"derived", derived_echo(scenario)}};
  } else {
    const SolverOptions options = resolve_options(args, env);
    solution.emplace(solve(scenario, options));
    code = exit_code_for(solution->report.status);
    echo = config_echo(scenario, options);
  }

  const FieldEvaluator field(scenario, solution->dma, solution->precoder);
  const PowerGrid grid = evaluate_grid(field, spec);

  const fs::path dir(args.out_dir);
  fs::create_directories(dir);
  std::ostringstream csv;
  write_grid_csv(csv, grid);
  write_text(dir / "grid.csv", csv.str());
  json sidecar = grid_sidecar(grid);
  sidecar["config_echo"] = echo;
  write_json(dir / "grid.json", sidecar);

  out << "grid: " << grid.spec.size() << " points, peak at (" << grid.peak_location.x << ", "
      << grid.peak_location.z << ") m, spot fraction " << grid.spot_fraction() << "\n";
  return code;
}

int cmd_sweep(const CommonArgs& args, const std::string& parameter, const std::string& values,
              std::size_t receiver_index, std::ostream& out, const EnvLookup& env) {
  static const std::vector<std::string> kParameters{"frequency", "weights", "receiver_z", "p_max"};
  if (std::find(kParameters.begin(), kParameters.end(), parameter) == kParameters.end())
    throw ConfigError("unknown sweep parameter \"" + parameter +
                      "\" (expected frequency, weights, receiver_z or p_max)");
  const Scenario base = load_scenario(args.scenario);
  const SolverOptions base_options = resolve_options(args, env);
  const std::vector<std::string> items = split(values, ',');
  if (items.empty()) throw ConfigError("--values must list at least one value");
  if (parameter == "receiver_z" && receiver_index >= base.receivers.size())
    throw ConfigError("--receiver index out of range");

  const std::size_t m_count = base.receivers.size();
  std::ostringstream csv;
  csv << "value";
  for (std::size_t m = 0; m < m_count; ++m) csv << ",E_" << (m + 1);
  csv << ",objective\n";

  json runs = json::array();
  int code = kOk;
  for (std::size_t k = 0; k < items.size(); ++k) {
    json scenario_json = scenario_to_json(base);
    const std::string& item = items[k];
    if (parameter == "frequency") {
      scenario_json["frequency_hz"] = parse_number<double>(item, "frequency");
    } else if (parameter == "p_max") {
      scenario_json["p_max_w"] = parse_number<double>(item, "p_max");
    } else if (parameter == "receiver_z") {
      scenario_json["receivers"][receiver_index]["position_m"][2] =
          parse_number<double>(item, "receiver_z");
    } else {
      const auto parts = split(item, '/');
      if (parts.size() != m_count)
        throw ConfigError("weights value \"" + item + "\" needs " + std::to_string(m_count) +
                          " '/'-separated entries");
      for (std::size_t m = 0; m < m_count; ++m)
        scenario_json["receivers"][m]["weight"] = parse_number<double>(parts[m], "weight");
    }
    const Scenario scenario = scenario_from_json(scenario_json);
    SolverOptions options = base_options;
    options.seed = base_options.seed + k;
    const Solution solution = solve(scenario, options);
    code = std::max(code, exit_code_for(solution.report.status));

    csv << item;
    for (double e : solution.report.energies_w) csv << ',' << format_double(e);
    csv << ',' << format_double(solution.report.objective) << '\n';
    runs.push_back({{"value", item},
                    {"seed", options.seed},
                    {"status", std::string(to_string(solution.report.status))},
                    {"energies_w", solution.report.energies_w},
                    {"objective", solution.report.objective}});
    out << parameter << " = " << item << ": objective " << solution.report.objective * 1e6
        << " uW (" << to_string(solution.report.status) << ")\n";
  }

  const fs::path dir(args.out_dir);
  fs::create_directories(dir);
  write_text(dir / "sweep.csv", csv.str());
  write_json(dir / "sweep.json", {{"parameter", parameter},
                                  {"values", items},
                                  {"runs", runs},
                                  {"config_echo", config_echo(base, base_options)}});
  return code;
}

}  // namespace

void apply_environment(SolverOptions& o, const EnvLookup& env) {
  override_from(env, "OUTER_ITERATIONS", o.outer_iterations);
  override_from(env, "RELATIVE_TOLERANCE", o.relative_tolerance);
  override_from(env, "RESTARTS", o.restarts);
  override_from(env, "SEED", o.seed);
  override_from(env, "EIGEN_TOLERANCE", o.eigen.tolerance);
  override_from(env, "EIGEN_MAX_ITERATIONS", o.eigen.max_iterations);
  override_from(env, "RCG_MAX_ITERATIONS", o.rcg.max_iterations);
  override_from(env, "RCG_GRADIENT_TOLERANCE", o.rcg.gradient_tolerance);
  override_from(env, "RCG_INITIAL_STEP", o.rcg.initial_step);
  override_from(env, "RCG_CONTRACTION", o.rcg.contraction);
  override_from(env, "RCG_SUFFICIENT_DECREASE", o.rcg.sufficient_decrease);
  override_from(env, "RCG_MAX_BACKTRACKS", o.rcg.max_backtracks);
  override_from(env, "RCG_RESTART_PERIOD", o.rcg.restart_period);
}

AxisRange parse_axis(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw ConfigError("axis \"" + text + "\" must be min:max:points");
  AxisRange axis{parse_number<double>(parts[0], "axis min"),
                 parse_number<double>(parts[1], "axis max"),
                 parse_number<std::size_t>(parts[2], "axis points")};
  if (axis.points < 2) throw ConfigError("axis \"" + text + "\" needs at least 2 points");
  return axis;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const EnvLookup& env) {
  CLI::App app{"Near-field DMA wireless power transfer designer"};
  app.name("nfwpt");
  app.require_subcommand(1);

  CommonArgs common;
  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--scenario", common.scenario, "Scenario JSON")->required();
    cmd->add_option("--out", common.out_dir, "Output directory");
    cmd->add_option("--seed", common.seed, "Random seed for phase initialization");
    cmd->add_option("--restarts", common.restarts, "Number of random restarts");
    cmd->add_option("--outer-iterations", common.outer_iterations, "Outer iteration cap T");
  };

  bool export_channels = false;
  auto* solve_cmd = app.add_subcommand("solve", "Optimize precoder and DMA weights");
  add_common(solve_cmd);
  solve_cmd->add_flag("--trace", common.trace, "Write per-iteration RCG trace.csv");
  solve_cmd->add_flag("--channels", export_channels, "Write channel_<m>.csv per receiver");

  std::string solution_dir, grid_x, grid_z;
  auto* grid_cmd = app.add_subcommand("grid", "Evaluate the received power field");
  add_common(grid_cmd);
  grid_cmd->add_option("--solution", solution_dir, "Directory holding dma.json and precoder.json");
  grid_cmd->add_option("--grid-x", grid_x, "x axis as min:max:points");
  grid_cmd->add_option("--grid-z", grid_z, "z axis as min:max:points");

  std::string parameter, values;
  std::size_t receiver_index = 0;
  auto* sweep_cmd = app.add_subcommand("sweep", "Solve once per parameter value");
  add_common(sweep_cmd);
  sweep_cmd->add_option("--parameter", parameter, "frequency | weights | receiver_z | p_max")
      ->required();
  sweep_cmd->add_option("--values", values,
                        "Comma-separated values; weights use '/' within a value")
      ->required();
  sweep_cmd->add_option("--receiver", receiver_index, "Receiver index for receiver_z (0-based)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadConfig;
  }

  try {
    if (*solve_cmd) return cmd_solve(common, export_channels, out, env);
    if (*grid_cmd) return cmd_grid(common, solution_dir, grid_x, grid_z, out, env);
    return cmd_sweep(common, parameter, values, receiver_index, out, env);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kBadConfig;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kBadConfig;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kBadConfig;
  }
}

}  // namespace nfwpt::cli
