#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pendulab/app/commands.hpp"
#include "pendulab/app/config.hpp"
#include "pendulab/error.hpp"

namespace {

using namespace pendulab;
using namespace pendulab::app;

/// Raw flag values; only flags actually given end up in the RunConfig.
struct Flags {
  std::string config_path;
  std::string output;
  std::string system;
  std::vector<double> ic;
  double t0 = 0, t1 = 0, dt = 0, theta0 = 0, omega0 = 0, level = 0, tau = 0, alpha = 0;
  std::string interpretation, scheme;
  std::uint64_t seed = 0, paths = 0;
  unsigned threads = 0;
};

std::string system_list() {
  std::ostringstream s;
  s << "Systems:\n";
  for (const auto& sys : systems()) {
    s << "  " << sys.name;
    for (std::size_t pad = sys.name.size(); pad < 18; ++pad) s << ' ';
    s << sys.summary << '\n';
  }
  s << "\nLevel constants: --level is the pendulum constant H (or K) with\n"
       "x1^2 + x2^2 = 2H. Closed-form Euler-top orbits write the same surface as\n"
       "x1^2 + x2^2 = 2H^2; simulate reports both readings of an Euler-top ic.\n";
  return s.str();
}

void add_run_options(CLI::App* cmd, Flags& f, bool ensemble) {
  std::string names;
  for (const auto& sys : systems()) names += (names.empty() ? "" : ", ") + std::string(sys.name);
  cmd->add_option("--system", f.system, "System id: " + names);
  cmd->add_option("--config", f.config_path, "JSON config file; flags override its fields");
  cmd->add_option("--output", f.output, "Output file (default: standard output)");
  cmd->add_option("--ic", f.ic, "Initial state, comma separated")->delimiter(',');
  cmd->add_option("--theta0", f.theta0, "Pendulum initial angle");
  cmd->add_option("--omega0", f.omega0, "Pendulum initial angular velocity");
  cmd->add_option("--level", f.level, "Pendulum level constant H or K");
  cmd->add_option("--t0", f.t0, "Start time");
  cmd->add_option("--t1", f.t1, "End time");
  cmd->add_option("--dt", f.dt, "Step size");
  cmd->add_option("--tau", f.tau, "Delay (delay systems)");
  cmd->add_option("--alpha", f.alpha, "Fractional order in (0, 1] (fractional systems)");
  cmd->add_option("--interpretation", f.interpretation, "Stochastic calculus: ito|strat")
      ->check(CLI::IsMember({"ito", "strat"}));
  cmd->add_option("--scheme", f.scheme, "SDE scheme: em|milstein|heun")
      ->check(CLI::IsMember({"em", "milstein", "heun"}));
  cmd->add_option("--seed", f.seed, "Master seed (stochastic systems)");
  if (ensemble) {
    cmd->add_option("--paths", f.paths, "Number of Monte Carlo paths (>= 2)");
    cmd->add_option("--threads", f.threads, "Worker threads (0 = all cores); output is identical");
  } else {
    // Accepted so that a stray --paths is reported as a config error, not a parse error.
    cmd->add_option("--paths", f.paths, "Ensemble only");
  }
}

RunConfig flags_to_config(const CLI::App* cmd, const Flags& f) {
  RunConfig c;
  auto given = [cmd](const char* name) { return cmd->count(name) > 0; };
  if (given("--system")) c.system = f.system;
  if (given("--ic")) c.ic = f.ic;
  if (given("--theta0")) c.theta0 = f.theta0;
  if (given("--omega0")) c.omega0 = f.omega0;
  if (given("--level")) c.level = f.level;
  if (given("--t0")) c.t0 = f.t0;
  if (given("--t1")) c.t1 = f.t1;
  if (given("--dt")) c.dt = f.dt;
  if (given("--tau")) c.tau = f.tau;
  if (given("--alpha")) c.alpha = f.alpha;
  if (given("--interpretation")) c.interpretation = f.interpretation;
  if (given("--scheme")) c.scheme = f.scheme;
  if (given("--seed")) c.seed = f.seed;
  if (given("--paths")) c.paths = f.paths;
  return c;
}

RunConfig effective_config(const CLI::App* cmd, const Flags& f) {
  RunConfig base;
  if (!f.config_path.empty()) base = load_config(f.config_path);
  return base.merged_with(flags_to_config(cmd, f));
}

void note_level_constants(const RunConfig& c) {
  const ResolvedRun run = resolve(c, Command::Simulate);
  if (info(run.system).pendulum) return;
  const auto& x = run.initial;
  const double h = 0.5 * (x[0] * x[0] + x[1] * x[1]);
  const double k = 0.5 * (x[1] * x[1] + x[2] * x[2]);
  std::fprintf(stderr,
               "ic level constants: H = %.10g, K = %.10g (x1^2+x2^2 = 2H);"
               " H = %.10g, K = %.10g (x1^2+x2^2 = 2H^2)\n",
               h, k, std::sqrt(h), std::sqrt(k));
}

/// Runs `write` against the chosen output; a file is only replaced on success.
int emit(const std::string& path, const std::function<bool(std::ostream&)>& write) {
  if (path.empty()) {
    const bool ok = write(std::cout);
    std::cout.flush();
    return ok ? 0 : 1;
  }
  std::ostringstream buf;
  const bool ok = write(buf);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("output", "cannot write '" + path + "'");
  out << buf.str();
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Euler top, pendulum and their delayed, fractional and stochastic variants"};
  app.require_subcommand(1);
  app.footer(system_list());

  Flags sim_flags, ens_flags;
  std::string suite, verify_output;

  auto* simulate = app.add_subcommand("simulate", "Integrate one system and write a CSV trajectory");
  add_run_options(simulate, sim_flags, false);
  simulate->footer(system_list());

  auto* ensemble = app.add_subcommand("ensemble", "Monte Carlo moments of a stochastic system as CSV");
  add_run_options(ensemble, ens_flags, true);
  ensemble->footer(system_list());

  auto* verify = app.add_subcommand("verify", "Run verification suites and write a JSON report");
  std::string suites;
  for (auto name : suite_names()) suites += (suites.empty() ? "" : "|") + std::string(name);
  verify->add_option("suite", suite, "Suite: " + suites)->required();
  verify->add_option("--output", verify_output, "Output file (default: standard output)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      const RunConfig c = effective_config(simulate, sim_flags);
      note_level_constants(c);
      return emit(sim_flags.output, [&](std::ostream& out) {
        cmd_simulate(c, out);
        return true;
      });
    }
    if (ensemble->parsed()) {
      const RunConfig c = effective_config(ensemble, ens_flags);
      return emit(ens_flags.output, [&](std::ostream& out) {
        cmd_ensemble(c, out, ens_flags.threads);
        return true;
      });
    }
    if (verify->parsed()) {
      return emit(verify_output, [&](std::ostream& out) { return cmd_verify(suite, out); });
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: invalid " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
