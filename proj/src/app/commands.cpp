#include <cstdio>
#include <ostream>
#include <string>

#include "pendulab/app/commands.hpp"
#include "pendulab/dde.hpp"
#include "pendulab/error.hpp"
#include "pendulab/fractional.hpp"
#include "pendulab/ode.hpp"
#include "pendulab/stochastic.hpp"

namespace pendulab::app {

namespace {

DelayedModel delayed_model(SystemId id) {
  switch (id) {
    case SystemId::EulerTopDdeZ: return DelayedModel::EulerTopDelayZ;
    case SystemId::EulerTopDdeX: return DelayedModel::EulerTopDelayX;
    case SystemId::PendulumDdeH: return DelayedModel::PendulumDelayH;
    case SystemId::PendulumDdeK: return DelayedModel::PendulumDelayK;
    default: break;
  }
  throw std::invalid_argument("not a delay system");
}

FractionalModel fractional_model(SystemId id) {
  switch (id) {
    case SystemId::EulerTopFracZ: return FractionalModel::EulerTopFracZ;
    case SystemId::EulerTopFracX: return FractionalModel::EulerTopFracX;
    case SystemId::PendulumFracH: return FractionalModel::PendulumFracH;
    case SystemId::PendulumFracK: return FractionalModel::PendulumFracK;
    default: break;
  }
  throw std::invalid_argument("not a fractional system");
}

SdeModel sde_model(SystemId id) {
  switch (id) {
    case SystemId::EulerTopSdeA: return SdeModel::EulerTopSdeA;
    case SystemId::EulerTopSdeB: return SdeModel::EulerTopSdeB;
    case SystemId::PendulumSde: return SdeModel::PendulumSde;
    default: break;
  }
  throw std::invalid_argument("not a stochastic system");
}

SdeSpec sde_spec(const ResolvedRun& run) {
  SdeSpec ito = make_sde(sde_model(run.system), info(run.system).pendulum ? run.level : 0.5);
  return run.interpretation == Interpretation::Stratonovich ? to_stratonovich(ito) : ito;
}

void write_row(std::ostream& out, double t, std::span<const double> values) {
  out << format_number(t);
  for (double v : values) out << ',' << format_number(v);
  out << '\n';
}

}  // namespace

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Trajectory run_simulation(const ResolvedRun& run) {
  const SystemInfo& sys = info(run.system);
  switch (sys.family) {
    case Family::Classical:
      if (sys.pendulum)
        return integrate(pendulum_field(PendulumParams::simple(run.level)), run.initial, run.grid);
      return integrate(euler_top_field(), run.initial, run.grid);
    case Family::Delay:
      return integrate_dde(DelayedSystem{delayed_model(run.system), run.level}, run.initial,
                           DelaySpec{run.tau}, run.grid);
    case Family::Fractional:
      return integrate_fractional(
          MixedOrderSystem{fractional_model(run.system), FractionalOrder(run.alpha), run.level},
          run.initial, run.grid);
    case Family::Stochastic: {
      const SdeSpec spec = sde_spec(run);
      const WienerPath path(path_seed(run.seed, 0), run.grid.steps(), run.grid.dt, spec.dim());
      return integrate_sde(spec, run.initial, run.grid.t0, path, run.scheme);
    }
  }
  throw std::invalid_argument("unknown system family");
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, bool pendulum) {
  out << (pendulum ? "t,theta,omega\n" : "t,x1,x2,x3\n");
  for (std::size_t i = 0; i < traj.size(); ++i) write_row(out, traj.time(i), traj.state(i));
}

void cmd_simulate(const RunConfig& config, std::ostream& out) {
  const ResolvedRun run = resolve(config, Command::Simulate);
  const Trajectory traj = run_simulation(run);
  write_trajectory_csv(out, traj, info(run.system).pendulum);
}

void cmd_ensemble(const RunConfig& config, std::ostream& out, unsigned threads) {
  const ResolvedRun run = resolve(config, Command::Ensemble);
  const SdeSpec spec = sde_spec(run);
  const EnsembleStats st =
      ensemble(spec, run.initial, run.paths, run.seed, run.grid, run.scheme, threads);

  const std::size_t n = st.dim;
  out << 't';
  for (const char* prefix : {"mean_", "var_", "ci_"})
    for (std::size_t c = 1; c <= n; ++c) out << ',' << prefix << c;
  out << '\n';

  std::vector<double> row(3 * n);
  for (std::size_t i = 0; i < st.times.size(); ++i) {
    for (std::size_t c = 0; c < n; ++c) {
      row[c] = st.at(st.mean, i, c);
      row[n + c] = st.at(st.variance, i, c);
      row[2 * n + c] = st.at(st.half_width, i, c);
    }
    write_row(out, st.times[i], row);
  }
}

}  // namespace pendulab::app
