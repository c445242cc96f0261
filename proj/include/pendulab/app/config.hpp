#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pendulab/ode.hpp"
#include "pendulab/stochastic.hpp"

namespace pendulab::app {

enum class SystemId {
  EulerTop,
  Pendulum,
  EulerTopDdeZ,
  EulerTopDdeX,
  PendulumDdeH,
  PendulumDdeK,
  EulerTopFracZ,
  EulerTopFracX,
  PendulumFracH,
  PendulumFracK,
  EulerTopSdeA,
  EulerTopSdeB,
  PendulumSde,
};

enum class Family { Classical, Delay, Fractional, Stochastic };

struct SystemInfo {
  SystemId id;
  std::string_view name;
  Family family;
  bool pendulum;
  std::string_view summary;
};

std::span<const SystemInfo> systems();
const SystemInfo& info(SystemId id);
/// Throws ConfigError("system", ...) for an unknown name.
SystemId parse_system(std::string_view name);

/// A run as given on the command line or in a JSON config file. Unset
/// fields take per-system defaults when resolved.
struct RunConfig {
  std::string system;
  std::optional<double> t0;
  std::optional<double> t1;
  std::optional<double> dt;
  std::optional<std::vector<double>> ic;
  std::optional<double> theta0;
  std::optional<double> omega0;
  std::optional<double> level;
  std::optional<double> tau;
  std::optional<double> alpha;
  std::optional<std::string> interpretation;
  std::optional<std::string> scheme;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> paths;

  /// Fields set in `over` replace those set here.
  RunConfig merged_with(const RunConfig& over) const;
};

nlohmann::json to_json(const RunConfig& c);
/// Rejects unknown keys and mistyped values with ConfigError.
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

enum class Command { Simulate, Ensemble };

/// A fully defaulted, validated run.
struct ResolvedRun {
  SystemId system;
  GridSpec grid;
  std::vector<double> initial;  ///< Euler top: (x1, x2, x3); pendula: (θ, ω)
  double level = 0.0;
  double tau = 0.0;
  double alpha = 1.0;
  Interpretation interpretation = Interpretation::Ito;
  Scheme scheme = Scheme::Milstein;
  std::uint64_t seed = 0;
  std::uint64_t paths = 0;
};

/// Applies defaults and checks that every set field applies to the chosen
/// system and command. Throws ConfigError naming the offending field.
ResolvedRun resolve(const RunConfig& c, Command cmd);

}  // namespace pendulab::app
