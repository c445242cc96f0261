#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>

#include "pendulab/analytic.hpp"
#include "pendulab/app/commands.hpp"
#include "pendulab/correspondence.hpp"
#include "pendulab/dde.hpp"
#include "pendulab/error.hpp"
#include "pendulab/fractional.hpp"
#include "pendulab/ode.hpp"
#include "pendulab/stochastic.hpp"

namespace pendulab::app {

namespace {

using Checks = std::vector<CheckResult>;

/// Collects checks for one suite.
class Report {
 public:
  Report(Checks& out, std::string suite) : out_(out), suite_(std::move(suite)) {}

  void at_most(std::string check, double observed, double bound) {
    out_.push_back({suite_, std::move(check), observed, bound, observed <= bound});
  }
  void at_least(std::string check, double observed, double bound) {
    out_.push_back({suite_, std::move(check), observed, bound, observed >= bound});
  }
  void within(std::string check, double observed, double lo, double hi) {
    out_.push_back({suite_, std::move(check), observed, nlohmann::json::array({lo, hi}),
                    observed >= lo && observed <= hi});
  }

 private:
  Checks& out_;
  std::string suite_;
};

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_abs_component(const Trajectory& traj, std::size_t c, double from, double to) {
  double m = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i)
    if (traj.time(i) >= from && traj.time(i) <= to) m = std::max(m, std::abs(traj.state(i)[c]));
  return m;
}

/// 0 when the run completes with finite states, 1 when it blows up.
double blew_up(const std::function<Trajectory()>& run) {
  try {
    const Trajectory traj = run();
    for (std::size_t i = 0; i < traj.size(); ++i)
      if (!all_finite(traj.state(i))) return 1.0;
    return 0.0;
  } catch (const IntegrationError&) {
    return 1.0;
  }
}

/// Mean spacing of successive upward crossings of `level` by component c.
double measured_period(const Trajectory& traj, std::size_t c, double level) {
  std::vector<double> ups;
  for (std::size_t i = 1; i < traj.size(); ++i) {
    const double a = traj.state(i - 1)[c] - level;
    const double b = traj.state(i)[c] - level;
    if (a < 0.0 && b >= 0.0) {
      const double t0 = traj.time(i - 1), t1 = traj.time(i);
      ups.push_back(t0 + (t1 - t0) * (-a) / (b - a));
    }
  }
  if (ups.size() < 2) return std::nan("");
  return (ups.back() - ups.front()) / static_cast<double>(ups.size() - 1);
}

double midrange(const Trajectory& traj, std::size_t c) {
  const auto col = traj.component(c);
  const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
  return 0.5 * (*lo + *hi);
}

void conservation_suite(Checks& out) {
  Report r(out, "conservation");
  const std::vector<double> ic{0.1, 0.1, 0.2};
  const Trajectory traj = integrate(euler_top_field(), ic, GridSpec{0.0, 100.0, 1e-3});
  for (Quantity q : kAllQuantities)
    r.at_most("euler-top " + std::string(to_string(q)) + " drift", conservation_drift(traj, q), 1e-8);

  const Trajectory pend =
      integrate(pendulum_field(PendulumParams::simple(0.5)), std::vector<double>{2.0, 0.0},
                GridSpec{0.0, 100.0, 1e-3});
  const auto energy = pendulum_energy(pend, 0.5);
  double drift = 0.0;
  for (double e : energy) drift = std::max(drift, std::abs(e - energy.front()));
  r.at_most("pendulum energy drift", drift, 1e-8);
}

void analytic_suite(Checks& out) {
  Report r(out, "analytic");
  const double H = 1.0, K = 2.0;
  const std::vector<double> ic{H * std::numbers::sqrt2, 0.0, K * std::numbers::sqrt2};
  const Trajectory traj = integrate(euler_top_field(), ic, GridSpec{0.0, 10.0, 1e-3});
  double err = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i)
    err = std::max(err, max_abs_diff(traj.state(i), jacobi_orbit(H, K, traj.time(i)).to_array()));
  r.at_most("euler-top jacobi orbit H=1 K=2", err, 1e-6);

  const auto periods = jacobi_orbit_periods(H, K);
  const double p1 = measured_period(traj, 0, 0.0);
  const double p3 = measured_period(traj, 2, midrange(traj, 2));
  r.at_most("euler-top x1 period relative error", std::abs(p1 - periods[0]) / periods[0], 1e-3);
  r.at_most("euler-top x3 period relative error", std::abs(p3 - periods[1]) / periods[1], 1e-3);

  const SignPattern sp = SignPattern::admissible().front();
  const State3 s0 = heteroclinic(0.5, 0.0, sp);
  const Trajectory het =
      integrate(euler_top_field(), s0.to_array(), GridSpec{0.0, 5.0, 1e-4});
  double het_err = 0.0;
  for (std::size_t i = 0; i < het.size(); ++i)
    het_err = std::max(het_err,
                       max_abs_diff(het.state(i), heteroclinic(0.5, het.time(i), sp).to_array()));
  r.at_most("euler-top heteroclinic shadowing H=K=0.5",
            het_err, 1e-4);

  const Trajectory sampled = [&] {
    Trajectory t(3);
    for (int i = 0; i <= 4000; ++i) {
      const double ti = -2.0 + 1e-3 * i;
      t.push(ti, heteroclinic(0.5, ti, sp).to_array());
    }
    return t;
  }();
  r.at_most("heteroclinic euler-top residual", residual_report(sampled, ResidualModel::euler_top()).worst(),
            1e-6);

  const Trajectory pend = integrate(pendulum_field(PendulumParams::simple(0.5)),
                                    std::vector<double>{2.0, 0.0}, GridSpec{0.0, 10.0, 1e-3});
  double pend_err = 0.0;
  for (std::size_t i = 0; i < pend.size(); ++i)
    pend_err = std::max(pend_err, std::abs(pend.state(i)[0] - pendulum_analytic(2.0, 0.5, pend.time(i))));
  r.at_most("pendulum closed form theta0=2 h=0.5", pend_err, 1e-6);
}

void correspondence_suite(Checks& out) {
  Report r(out, "correspondence");
  const double h = 0.5;
  const Trajectory pend = integrate(pendulum_field(PendulumParams::simple(h)),
                                    std::vector<double>{-3.8, 0.0}, GridSpec{0.0, 10.0, 1e-4});
  for (SurfaceAxis axis : {SurfaceAxis::H, SurfaceAxis::K}) {
    const std::string name = axis == SurfaceAxis::H ? "H" : "K";
    const LevelSurface surface(axis, h);
    const Trajectory mapped = pendulum_to_euler(pend, surface);
    r.at_most("pendulum -> euler-top " + name + "-surface residual",
              residual_report(mapped, ResidualModel::euler_top()).worst(), 1e-5);
  }

  const std::vector<double> ic{0.1, 0.1, 0.2};
  const Trajectory top = integrate(euler_top_field(), ic, GridSpec{0.0, 100.0, 1e-3});
  const LevelConstants lc = level_constants(State3::from(ic));
  for (SurfaceAxis axis : {SurfaceAxis::H, SurfaceAxis::K}) {
    const std::string name = axis == SurfaceAxis::H ? "H" : "K";
    const double level = axis == SurfaceAxis::H ? lc.h : lc.k;
    const Trajectory theta = euler_to_pendulum(top, LevelSurface(axis, level));
    r.at_most("euler-top -> pendulum " + name + "-surface residual",
              residual_report(theta, ResidualModel::pendulum(level)).worst(), 1e-5);
  }
}

void delay_suite(Checks& out) {
  Report r(out, "delay");
  const std::vector<double> ic{0.1, 0.05, 0.2};
  const GridSpec grid{0.0, 50.0, 0.01};
  const DelaySpec tau1{1.0};
  const Trajectory z = integrate_dde({DelayedModel::EulerTopDelayZ, 0.0}, ic, tau1, grid);
  r.at_most("euler-top-dde-z H1 drift", conservation_drift(z, Quantity::H1), 1e-8);
  const Trajectory x = integrate_dde({DelayedModel::EulerTopDelayX, 0.0}, ic, tau1, grid);
  r.at_most("euler-top-dde-x C1 drift", conservation_drift(x, Quantity::C1), 1e-8);

  const GridSpec tiny{0.0, 1.0, 1e-7};
  const Trajectory small = integrate_dde({DelayedModel::EulerTopDelayZ, 0.0}, ic, DelaySpec{1e-6},
                                         tiny, DdeOptions{1000});
  const Trajectory classical = integrate(euler_top_field(), ic, GridSpec{0.0, 1.0, 1e-4});
  r.at_most("euler-top-dde-z tau=1e-6 vs classical",
            max_abs_diff(small.back(), classical.back()), 1e-4);

  const double H = 0.5;
  const Trajectory ph = integrate_dde({DelayedModel::PendulumDelayH, H}, std::vector<double>{2.0, 0.0},
                                      tau1, GridSpec{0.0, 50.0, 0.01});
  double window = 0.0;
  for (std::size_t i = 0; i < ph.size() && ph.time(i) <= 1.0 + 1e-12; ++i) {
    const double t = ph.time(i);
    window = std::max(window, std::abs(ph.state(i)[0] - (2.0 - H * std::sin(2.0) * t * t)));
  }
  r.at_most("pendulum-dde-h first window closed form", window, 1e-10);

  r.at_most("pendulum-dde-k K=0.3 blow-up", blew_up([&] {
              return integrate_dde({DelayedModel::PendulumDelayK, 0.3},
                                   std::vector<double>{2.0, 0.0}, tau1, GridSpec{0.0, 50.0, 0.01});
            }),
            0.0);
}

void fractional_suite(Checks& out) {
  Report r(out, "fractional");
  const GridSpec grid{0.0, 50.0, 1e-3};
  const std::vector<double> pic{-3.1, 0.0};
  const Trajectory one =
      integrate_fractional({FractionalModel::PendulumFracH, FractionalOrder(1.0), 0.5}, pic, grid);
  const Trajectory rk4 = integrate(pendulum_field(PendulumParams::simple(0.5)), pic, grid);
  double err = 0.0;
  for (std::size_t i = 0; i < one.size(); ++i)
    err = std::max(err, std::abs(one.state(i)[0] - rk4.state(i)[0]));
  r.at_most("pendulum-frac-h alpha=1 vs classical", err, 1e-3);

  const Trajectory decay =
      integrate_fractional({FractionalModel::PendulumFracH, FractionalOrder(0.8), 0.5}, pic, grid);
  const double early = max_abs_component(decay, 0, 0.0, 10.0);
  const double late = max_abs_component(decay, 0, 40.0, 50.0);
  r.at_most("pendulum-frac-h alpha=0.8 late/early amplitude", late / early, 1.0 - 1e-12);

  const Trajectory decay_k =
      integrate_fractional({FractionalModel::PendulumFracK, FractionalOrder(0.8), 0.5}, pic, grid);
  r.at_most("pendulum-frac-k alpha=0.8 late/early amplitude",
            max_abs_component(decay_k, 0, 40.0, 50.0) / max_abs_component(decay_k, 0, 0.0, 10.0),
            1.0 - 1e-12);

  const std::vector<double> ic{0.1, 0.1, 0.3};
  const GridSpec top_grid{0.0, 20.0, 1e-3};
  const Trajectory z =
      integrate_fractional({FractionalModel::EulerTopFracZ, FractionalOrder(0.8), 0.0}, ic, top_grid);
  r.at_most("euler-top-frac-z H1 drift", conservation_drift(z, Quantity::H1), 1e-6);
  const Trajectory x =
      integrate_fractional({FractionalModel::EulerTopFracX, FractionalOrder(0.8), 0.0}, ic, top_grid);
  r.at_most("euler-top-frac-x C1 drift", conservation_drift(x, Quantity::C1), 1e-6);
}

ConvergenceSetup sde_a_setup() {
  ConvergenceSetup s;
  s.x0 = {0.1, 0.1, 0.1};
  s.t0 = 1.0;
  s.horizon = 1.0;
  s.paths = 200;
  s.master_seed = 20240607;
  return s;
}

void sde_convergence_suite(Checks& out) {
  Report r(out, "sde-convergence");
  const SdeSpec ito = make_sde(SdeModel::EulerTopSdeA);
  const ConvergenceSetup setup = sde_a_setup();
  const auto em = strong_convergence(ito, Scheme::EulerMaruyama, ito, Scheme::Milstein, setup);
  r.within("euler-top-sde-a EM strong slope", em.slope, 0.4, 0.6);
  const auto mil = strong_convergence(ito, Scheme::Milstein, ito, Scheme::Milstein, setup);
  r.within("euler-top-sde-a Milstein strong slope", mil.slope, 0.85, 1.15);
  const auto gap = pathwise_gap(ito, Scheme::Milstein, to_stratonovich(ito),
                                Scheme::StratonovichHeun, setup);
  r.at_least("euler-top-sde-a ito vs stratonovich gap slope", gap.slope, 0.5);
}

void stochastic_suite(Checks& out) {
  Report r(out, "stochastic");

  const std::size_t seeds = 100000;
  double mean = 0.0, m2 = 0.0;
  for (std::size_t s = 0; s < seeds; ++s) {
    const double w = generate_wiener(path_seed(7, s), 16, 1.0 / 16.0, 1).value(0, 16);
    const double d = w - mean;
    mean += d / static_cast<double>(s + 1);
    m2 += d * (w - mean);
  }
  r.within("wiener W(1) mean", mean, -0.02, 0.02);
  r.within("wiener W(1) variance", m2 / static_cast<double>(seeds - 1), 0.97, 1.03);

  // Itô -> Stratonovich -> Itô restores the drift exactly.
  double roundtrip = 0.0;
  for (SdeModel m : {SdeModel::EulerTopSdeA, SdeModel::EulerTopSdeB, SdeModel::PendulumSde}) {
    const SdeSpec ito = make_sde(m);
    const SdeSpec back = to_ito(to_stratonovich(ito));
    std::vector<double> x(ito.dim(), 0.37), a(ito.dim()), b(ito.dim());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += 0.11 * static_cast<double>(i);
    ito.drift(x, a);
    back.drift(x, b);
    roundtrip = std::max(roundtrip, max_abs_diff(a, b));
  }
  r.at_most("drift conversion round trip", roundtrip, 0.0);

  // d E[x2]/dt = -E[x1 x3] at t = 2, paired per path to cancel shared noise.
  const SdeSpec sde_a = make_sde(SdeModel::EulerTopSdeA);
  const double dt = 1e-3, h = 0.05;
  const std::size_t center = 1000, lag = 50, paths = 10000;
  const std::vector<double> x0{0.1, 0.1, 0.1};
  double dmean = 0.0, dm2 = 0.0;
  for (std::size_t p = 0; p < paths; ++p) {
    const WienerPath path(path_seed(99, p), center + lag, dt, 3);
    const Trajectory tr = integrate_sde(sde_a, x0, 1.0, path, Scheme::Milstein);
    const auto mid = tr.state(center);
    const double fd = (tr.state(center + lag)[1] - tr.state(center - lag)[1]) / (2.0 * h);
    const double v = fd + mid[0] * mid[2];
    const double d = v - dmean;
    dmean += d / static_cast<double>(p + 1);
    dm2 += d * (v - dmean);
  }
  const double ci = 1.96 * std::sqrt(dm2 / static_cast<double>(paths - 1) / static_cast<double>(paths));
  r.at_most("euler-top-sde-a first moment identity |dE[x2]/dt + E[x1x3]| / CI",
            std::abs(dmean) / ci, 3.0);

  const GridSpec grid{1.0, 10.0, 1e-3};
  const SdeSpec sde_b = make_sde(SdeModel::EulerTopSdeB);
  const WienerPath wb(path_seed(42, 0), grid.steps(), grid.dt, 3);
  r.at_most("euler-top-sde-b blow-up", blew_up([&] {
              return integrate_sde(sde_b, std::vector<double>{1.0, 0.8, 0.2}, 1.0, wb,
                                   Scheme::EulerMaruyama);
            }),
            0.0);
  const SdeSpec pend = make_sde(SdeModel::PendulumSde, 0.5);
  const WienerPath wp(path_seed(42, 0), grid.steps(), grid.dt, 2);
  r.at_most("pendulum-sde blow-up", blew_up([&] {
              return integrate_sde(pend, std::vector<double>{1.0, 0.8}, 1.0, wp,
                                   Scheme::EulerMaruyama);
            }),
            0.0);
}

using SuiteFn = void (*)(Checks&);

const std::vector<std::pair<std::string_view, SuiteFn>>& suites() {
  static const std::vector<std::pair<std::string_view, SuiteFn>> table{
      {"conservation", conservation_suite},     {"analytic", analytic_suite},
      {"correspondence", correspondence_suite}, {"delay", delay_suite},
      {"fractional", fractional_suite},         {"sde-convergence", sde_convergence_suite},
      {"stochastic", stochastic_suite},
  };
  return table;
}

}  // namespace

std::vector<std::string_view> suite_names() {
  std::vector<std::string_view> names;
  for (const auto& [name, fn] : suites()) names.push_back(name);
  names.push_back("all");
  return names;
}

std::vector<CheckResult> run_verify(std::string_view suite) {
  Checks out;
  bool found = false;
  for (const auto& [name, fn] : suites()) {
    if (suite == "all" || suite == name) {
      fn(out);
      found = true;
    }
  }
  if (!found) throw ConfigError("suite", "unknown suite '" + std::string(suite) + "'");
  return out;
}

nlohmann::json to_json(const std::vector<CheckResult>& results) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& c : results) {
    a.push_back({{"suite", c.suite},
                 {"check", c.check},
                 {"observed", c.observed},
                 {"bound", c.bound},
                 {"pass", c.pass}});
  }
  return a;
}

bool cmd_verify(std::string_view suite, std::ostream& out) {
  const auto results = run_verify(suite);
  out << to_json(results).dump(2) << '\n';
  return std::all_of(results.begin(), results.end(), [](const CheckResult& c) { return c.pass; });
}

}  // namespace pendulab::app
