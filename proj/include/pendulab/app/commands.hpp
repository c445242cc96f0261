#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pendulab/app/config.hpp"
#include "pendulab/trajectory.hpp"

namespace pendulab::app {

/// Formats with 17 significant digits (round-trip exact for doubles).
std::string format_number(double v);

/// Integrates a resolved run on its grid.
Trajectory run_simulation(const ResolvedRun& run);

/// CSV "t,x1,x2,x3" or "t,theta,omega", one row per grid node.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj, bool pendulum);

void cmd_simulate(const RunConfig& config, std::ostream& out);

/// CSV "t,mean_1..mean_n,var_1..var_n,ci_1..ci_n". Rejects deterministic systems.
void cmd_ensemble(const RunConfig& config, std::ostream& out, unsigned threads = 0);

/// One line of the verify report.
struct CheckResult {
  std::string suite;
  std::string check;
  double observed = 0.0;
  nlohmann::json bound;  ///< number (upper or lower limit) or [lo, hi]
  bool pass = false;
};

std::vector<std::string_view> suite_names();

/// Runs one suite, or every suite for "all". Throws ConfigError for an
/// unknown name.
std::vector<CheckResult> run_verify(std::string_view suite);

nlohmann::json to_json(const std::vector<CheckResult>& results);

/// Writes the JSON report; returns true iff every check passed.
bool cmd_verify(std::string_view suite, std::ostream& out);

}  // namespace pendulab::app
