#include "pendulab/ode.hpp"

#include <algorithm>
#include <cmath>

#include "pendulab/error.hpp"

namespace pendulab {

namespace {

// Relative slack when deciding that dt divides the span.
constexpr double kDivisibilitySlack = 1e-9;

void check_stage(std::span<const double> v, double t) {
  if (!all_finite(v)) throw IntegrationError("non-finite Runge-Kutta stage", t);
}

}  // namespace

void GridSpec::validate() const {
  if (!std::isfinite(t0)) throw ConfigError("t0", "must be finite");
  if (!std::isfinite(t1) || !(t1 > t0)) throw ConfigError("t1", "must be finite and greater than t0");
  if (!std::isfinite(dt) || !(dt > 0.0)) throw ConfigError("dt", "must be finite and positive");
  if ((t1 - t0) / dt > kMaxSteps) throw ConfigError("dt", "grid exceeds 1e8 steps");
}

std::size_t GridSpec::steps() const {
  validate();
  const double ratio = (t1 - t0) / dt;
  const double whole = std::round(ratio);
  if (whole >= 1.0 && std::abs(ratio - whole) <= kDivisibilitySlack * whole) {
    return static_cast<std::size_t>(whole);
  }
  return static_cast<std::size_t>(std::floor(ratio)) + 1;
}

bool GridSpec::uniform() const {
  validate();
  const double ratio = (t1 - t0) / dt;
  const double whole = std::round(ratio);
  return whole >= 1.0 && std::abs(ratio - whole) <= kDivisibilitySlack * whole;
}

std::vector<double> GridSpec::nodes() const {
  const std::size_t n = steps();
  std::vector<double> t(n + 1);
  for (std::size_t i = 0; i < n; ++i) t[i] = t0 + static_cast<double>(i) * dt;
  t[n] = t1;
  return t;
}

Rk4Stepper::Rk4Stepper(std::size_t dim) : k1_(dim), k2_(dim), k3_(dim), k4_(dim), tmp_(dim) {}

void Rk4Stepper::step(const VectorField& f, double t, std::span<double> x, double dt) {
  const std::size_t n = x.size();
  const double half = 0.5 * dt;

  f(t, x, k1_);
  check_stage(k1_, t);
  for (std::size_t i = 0; i < n; ++i) tmp_[i] = x[i] + half * k1_[i];
  f(t + half, tmp_, k2_);
  check_stage(k2_, t);
  for (std::size_t i = 0; i < n; ++i) tmp_[i] = x[i] + half * k2_[i];
  f(t + half, tmp_, k3_);
  check_stage(k3_, t);
  for (std::size_t i = 0; i < n; ++i) tmp_[i] = x[i] + dt * k3_[i];
  f(t + dt, tmp_, k4_);
  check_stage(k4_, t);

  const double sixth = dt / 6.0;
  for (std::size_t i = 0; i < n; ++i) {
    x[i] += sixth * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
  }
  check_stage(x, t + dt);
}

std::vector<double> rk4_step(const VectorField& f, double t, std::span<const double> x, double dt) {
  std::vector<double> out(x.begin(), x.end());
  Rk4Stepper(x.size()).step(f, t, out, dt);
  return out;
}

Trajectory integrate(const VectorField& f, std::span<const double> x0, const GridSpec& grid) {
  if (!all_finite(x0)) throw DomainError("integrate: non-finite initial state");
  const std::vector<double> t = grid.nodes();
  Trajectory traj(x0.size());
  traj.reserve(t.size());
  std::vector<double> x(x0.begin(), x0.end());
  traj.push(t[0], x);
  Rk4Stepper stepper(x.size());
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    stepper.step(f, t[i], x, t[i + 1] - t[i]);
    traj.push(t[i + 1], x);
  }
  return traj;
}

double conservation_drift(const Trajectory& traj, Quantity q) {
  if (traj.dim() != 3) throw std::invalid_argument("conservation_drift needs a 3-dimensional trajectory");
  if (traj.empty()) return 0.0;
  const double ref = conserved(q, State3::from(traj.state(0)));
  double worst = 0.0;
  for (std::size_t i = 1; i < traj.size(); ++i) {
    worst = std::max(worst, std::abs(conserved(q, State3::from(traj.state(i))) - ref));
  }
  return worst;
}

}  // namespace pendulab
