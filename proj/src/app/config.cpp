#include "pendulab/app/config.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "pendulab/error.hpp"

namespace pendulab::app {

using nlohmann::json;

namespace {

constexpr std::array<SystemInfo, 13> kSystems{{
    {SystemId::EulerTop, "euler-top", Family::Classical, false, "free Euler top (x1, x2, x3)"},
    {SystemId::Pendulum, "pendulum", Family::Classical, true, "pendulum theta'' + 2h sin(theta) = 0"},
    {SystemId::EulerTopDdeZ, "euler-top-dde-z", Family::Delay, false,
     "Euler top, x3' uses x1, x2 delayed by tau"},
    {SystemId::EulerTopDdeX, "euler-top-dde-x", Family::Delay, false,
     "Euler top, x1' uses x2, x3 delayed by tau"},
    {SystemId::PendulumDdeH, "pendulum-dde-h", Family::Delay, true,
     "theta'' + 2H sin(theta(t - tau)) = 0"},
    {SystemId::PendulumDdeK, "pendulum-dde-k", Family::Delay, true,
     "theta'' + 2K sin(theta(t - tau)) = 0"},
    {SystemId::EulerTopFracZ, "euler-top-frac-z", Family::Fractional, false,
     "Euler top with Caputo order alpha on x3"},
    {SystemId::EulerTopFracX, "euler-top-frac-x", Family::Fractional, false,
     "Euler top with Caputo order alpha on x1"},
    {SystemId::PendulumFracH, "pendulum-frac-h", Family::Fractional, true,
     "D^(alpha+1) theta + 2H sin(theta) = 0"},
    {SystemId::PendulumFracK, "pendulum-frac-k", Family::Fractional, true,
     "D^(alpha+1) theta + 2K sin(theta) = 0"},
    {SystemId::EulerTopSdeA, "euler-top-sde-a", Family::Stochastic, false,
     "Euler top, noise x1 dW1 and dW3"},
    {SystemId::EulerTopSdeB, "euler-top-sde-b", Family::Stochastic, false,
     "Euler top, square-root noise on every component"},
    {SystemId::PendulumSde, "pendulum-sde", Family::Stochastic, true,
     "pendulum (x1, x2) with square-root noise"},
}};

constexpr std::array<const char*, 14> kFields{"system", "t0",     "t1",    "dt",    "ic",
                                              "theta0", "omega0", "level", "tau",   "alpha",
                                              "interpretation",   "scheme", "seed", "paths"};

template <class T>
void take(std::optional<T>& dst, const std::optional<T>& src) {
  if (src) dst = src;
}

double get_number(const json& j, const char* field) {
  if (!j.is_number()) throw ConfigError(field, "expected a number");
  return j.get<double>();
}

std::uint64_t get_count(const json& j, const char* field) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
    throw ConfigError(field, "expected a non-negative integer");
  return j.get<std::uint64_t>();
}

std::string get_string(const json& j, const char* field) {
  if (!j.is_string()) throw ConfigError(field, "expected a string");
  return j.get<std::string>();
}

void require_finite(double v, const char* field) {
  if (!std::isfinite(v)) throw ConfigError(field, "must be finite");
}

void require_positive(double v, const char* field) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(field, "must be positive and finite");
}

Interpretation parse_interpretation(const std::string& s) {
  if (s == "ito") return Interpretation::Ito;
  if (s == "strat") return Interpretation::Stratonovich;
  throw ConfigError("interpretation", "expected ito or strat, got '" + s + "'");
}

Scheme parse_scheme(const std::string& s) {
  if (s == "em") return Scheme::EulerMaruyama;
  if (s == "milstein") return Scheme::Milstein;
  if (s == "heun") return Scheme::StratonovichHeun;
  throw ConfigError("scheme", "expected em, milstein or heun, got '" + s + "'");
}

std::vector<double> default_ic(SystemId id) {
  switch (id) {
    case SystemId::EulerTop: return {0.1, 0.1, 0.2};
    case SystemId::Pendulum: return {-3.8, 0.0};
    case SystemId::EulerTopDdeZ:
    case SystemId::EulerTopDdeX: return {0.1, 0.05, 0.2};
    case SystemId::PendulumDdeH:
    case SystemId::PendulumDdeK: return {2.0, 0.0};
    case SystemId::EulerTopFracZ:
    case SystemId::EulerTopFracX: return {0.1, 0.1, 0.3};
    case SystemId::PendulumFracH:
    case SystemId::PendulumFracK: return {-3.1, 0.0};
    case SystemId::EulerTopSdeA: return {0.1, 0.1, 0.1};
    case SystemId::EulerTopSdeB: return {1.0, 0.8, 0.2};
    case SystemId::PendulumSde: return {1.0, 0.8};
  }
  return {};
}

}  // namespace

std::span<const SystemInfo> systems() { return kSystems; }

const SystemInfo& info(SystemId id) {
  for (const auto& s : kSystems)
    if (s.id == id) return s;
  throw std::invalid_argument("unknown system id");
}

SystemId parse_system(std::string_view name) {
  for (const auto& s : kSystems)
    if (s.name == name) return s.id;
  if (name.empty()) throw ConfigError("system", "no system selected");
  throw ConfigError("system", "unknown system '" + std::string(name) + "'");
}

RunConfig RunConfig::merged_with(const RunConfig& over) const {
  RunConfig r = *this;
  if (!over.system.empty()) r.system = over.system;
  take(r.t0, over.t0);
  take(r.t1, over.t1);
  take(r.dt, over.dt);
  take(r.ic, over.ic);
  take(r.theta0, over.theta0);
  take(r.omega0, over.omega0);
  take(r.level, over.level);
  take(r.tau, over.tau);
  take(r.alpha, over.alpha);
  take(r.interpretation, over.interpretation);
  take(r.scheme, over.scheme);
  take(r.seed, over.seed);
  take(r.paths, over.paths);
  return r;
}

json to_json(const RunConfig& c) {
  json j = json::object();
  if (!c.system.empty()) j["system"] = c.system;
  auto put = [&j](const char* key, const auto& v) {
    if (v) j[key] = *v;
  };
  put("t0", c.t0);
  put("t1", c.t1);
  put("dt", c.dt);
  put("ic", c.ic);
  put("theta0", c.theta0);
  put("omega0", c.omega0);
  put("level", c.level);
  put("tau", c.tau);
  put("alpha", c.alpha);
  put("interpretation", c.interpretation);
  put("scheme", c.scheme);
  put("seed", c.seed);
  put("paths", c.paths);
  return j;
}

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config", "expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(kFields.begin(), kFields.end(), key) == kFields.end())
      throw ConfigError(key, "unknown config field");
  }
  RunConfig c;
  auto number = [&j](const char* key, std::optional<double>& dst) {
    if (j.contains(key)) dst = get_number(j.at(key), key);
  };
  if (j.contains("system")) c.system = get_string(j.at("system"), "system");
  number("t0", c.t0);
  number("t1", c.t1);
  number("dt", c.dt);
  number("theta0", c.theta0);
  number("omega0", c.omega0);
  number("level", c.level);
  number("tau", c.tau);
  number("alpha", c.alpha);
  if (j.contains("ic")) {
    const auto& a = j.at("ic");
    if (!a.is_array()) throw ConfigError("ic", "expected an array of numbers");
    std::vector<double> v;
    for (const auto& e : a) v.push_back(get_number(e, "ic"));
    c.ic = std::move(v);
  }
  if (j.contains("interpretation"))
    c.interpretation = get_string(j.at("interpretation"), "interpretation");
  if (j.contains("scheme")) c.scheme = get_string(j.at("scheme"), "scheme");
  if (j.contains("seed")) c.seed = get_count(j.at("seed"), "seed");
  if (j.contains("paths")) c.paths = get_count(j.at("paths"), "paths");
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("malformed JSON: ") + e.what());
  }
  return config_from_json(j);
}

ResolvedRun resolve(const RunConfig& c, Command cmd) {
  ResolvedRun r;
  r.system = parse_system(c.system);
  const SystemInfo& sys = info(r.system);
  const bool stochastic = sys.family == Family::Stochastic;

  // Fields that do not apply to this system are rejected rather than ignored.
  auto reject = [&](bool set, const char* field, const char* why) {
    if (set) throw ConfigError(field, std::string("not used by ") + std::string(sys.name) + why);
  };
  const bool takes_level = sys.pendulum;
  reject(c.level.has_value() && !takes_level, "level", "");
  reject(c.tau.has_value() && sys.family != Family::Delay, "tau", " (delay systems only)");
  reject(c.alpha.has_value() && sys.family != Family::Fractional, "alpha",
         " (fractional systems only)");
  reject(c.interpretation.has_value() && !stochastic, "interpretation",
         " (stochastic systems only)");
  reject(c.scheme.has_value() && !stochastic, "scheme", " (stochastic systems only)");
  reject(c.seed.has_value() && !stochastic, "seed", " (stochastic systems only)");
  reject(c.paths.has_value() && cmd != Command::Ensemble, "paths", " outside ensemble runs");
  reject((c.theta0 || c.omega0) && !sys.pendulum, c.theta0 ? "theta0" : "omega0",
         " (Euler-top systems take ic)");
  if (sys.pendulum && c.ic && (c.theta0 || c.omega0))
    throw ConfigError(c.theta0 ? "theta0" : "omega0", "conflicts with ic; give one or the other");

  if (cmd == Command::Ensemble && !stochastic)
    throw ConfigError("system", std::string(sys.name) + " is deterministic; ensembles need a stochastic system");

  // Grid.
  r.grid.t0 = c.t0.value_or(stochastic ? 1.0 : 0.0);
  r.grid.t1 = c.t1.value_or(r.grid.t0 + (stochastic ? 9.0 : 50.0));
  r.grid.dt = c.dt.value_or(1e-3);
  r.grid.validate();

  // Initial state.
  r.initial = default_ic(r.system);
  if (c.ic) {
    if (c.ic->size() != r.initial.size() &&
        !(sys.pendulum && !stochastic && c.ic->size() == 1)) {
      std::ostringstream msg;
      msg << "expected " << r.initial.size() << " values, got " << c.ic->size();
      throw ConfigError("ic", msg.str());
    }
    std::copy(c.ic->begin(), c.ic->end(), r.initial.begin());
    if (c.ic->size() == 1) r.initial[1] = 0.0;
  }
  if (c.theta0) r.initial[0] = *c.theta0;
  if (c.omega0) r.initial[1] = *c.omega0;
  for (double v : r.initial) require_finite(v, c.ic ? "ic" : (sys.pendulum ? "theta0" : "ic"));

  if (takes_level) {
    r.level = c.level.value_or(r.system == SystemId::PendulumDdeK ? 0.3 : 0.5);
    require_positive(r.level, "level");
  }
  if (sys.family == Family::Delay) {
    r.tau = c.tau.value_or(1.0);
    require_positive(r.tau, "tau");
    if (r.grid.dt > r.tau / 4.0) throw ConfigError("dt", "must not exceed tau/4");
  }
  if (sys.family == Family::Fractional) {
    r.alpha = c.alpha.value_or(0.8);
    if (!(r.alpha > 0.0 && r.alpha <= 1.0)) throw ConfigError("alpha", "must lie in (0, 1]");
    if (!r.grid.uniform()) throw ConfigError("dt", "must divide t1 - t0 for fractional systems");
  }
  if (stochastic) {
    if (!r.grid.uniform()) throw ConfigError("dt", "must divide t1 - t0 for stochastic systems");
    std::optional<Scheme> scheme;
    if (c.scheme) scheme = parse_scheme(*c.scheme);
    if (c.interpretation) {
      r.interpretation = parse_interpretation(*c.interpretation);
    } else if (scheme) {
      r.interpretation = *scheme == Scheme::StratonovichHeun ? Interpretation::Stratonovich
                                                               : Interpretation::Ito;
    }
    if (scheme) {
      r.scheme = *scheme;
    } else if (r.interpretation == Interpretation::Stratonovich) {
      r.scheme = Scheme::StratonovichHeun;
    } else {
      r.scheme = r.system == SystemId::EulerTopSdeA ? Scheme::Milstein : Scheme::EulerMaruyama;
    }
    const bool strat_scheme = r.scheme == Scheme::StratonovichHeun;
    if (strat_scheme != (r.interpretation == Interpretation::Stratonovich))
      throw ConfigError("scheme", std::string(to_string(r.scheme)) + " does not integrate the " +
                                      std::string(to_string(r.interpretation)) + " form");
    r.seed = c.seed.value_or(1);
    if (cmd == Command::Ensemble) {
      r.paths = c.paths.value_or(1000);
      if (r.paths < 2) throw ConfigError("paths", "an ensemble needs at least 2 paths");
    }
  }
  return r;
}

}  // namespace pendulab::app
