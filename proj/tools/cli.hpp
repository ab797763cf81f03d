#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "nfwpt/alternating_solver.hpp"
#include "nfwpt/field.hpp"

namespace nfwpt::cli {

enum ExitCode : int {
  kOk = 0,
  kBadConfig = 1,
  kUnservable = 2,
  kNotConverged = 3,
};

/// Environment lookup; returns nullopt for unset variables.
using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

EnvLookup process_environment();

/// Applies NFWPT_* overrides for every numeric solver option, e.g.
/// NFWPT_OUTER_ITERATIONS or NFWPT_RCG_GRADIENT_TOLERANCE. Throws
/// ConfigError on unparsable values.
void apply_environment(SolverOptions& options, const EnvLookup& env);

/// "a:b:n" -> AxisRange. Throws ConfigError.
AxisRange parse_axis(const std::string& text);

/// Entry point for `nfwpt solve|grid|sweep ...`; `args` excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const EnvLookup& env = process_environment());

}  // namespace nfwpt::cli
