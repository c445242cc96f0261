#include "pendulab/dde.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pendulab/error.hpp"

namespace pendulab {

namespace {

constexpr double kNodeSnap = 1e-9;  // fraction of a step

using DelayedField = void (*)(double level, std::span<const double> x, std::span<const double> xd,
                              std::span<double> out);

void delay_z(double, std::span<const double> x, std::span<const double> xd, std::span<double> out) {
  out[0] = x[1] * x[2];
  out[1] = -x[0] * x[2];
  out[2] = xd[0] * xd[1];
}

void delay_x(double, std::span<const double> x, std::span<const double> xd, std::span<double> out) {
  out[0] = xd[1] * xd[2];
  out[1] = -x[0] * x[2];
  out[2] = x[0] * x[1];
}

void delay_pendulum(double level, std::span<const double> x, std::span<const double> xd,
                    std::span<double> out) {
  out[0] = x[1];
  out[1] = -2.0 * level * std::sin(xd[0]);
}

DelayedField field_for(DelayedModel m) {
  switch (m) {
    case DelayedModel::EulerTopDelayZ: return delay_z;
    case DelayedModel::EulerTopDelayX: return delay_x;
    case DelayedModel::PendulumDelayH:
    case DelayedModel::PendulumDelayK: return delay_pendulum;
  }
  return delay_z;
}

}  // namespace

void DelaySpec::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw ConfigError("tau", "delay must be finite and positive");
}

std::string_view to_string(DelayedModel m) {
  switch (m) {
    case DelayedModel::EulerTopDelayZ: return "euler-top-dde-z";
    case DelayedModel::EulerTopDelayX: return "euler-top-dde-x";
    case DelayedModel::PendulumDelayH: return "pendulum-dde-h";
    case DelayedModel::PendulumDelayK: return "pendulum-dde-k";
  }
  return "?";
}

std::size_t DelayedSystem::dim() const {
  switch (model) {
    case DelayedModel::EulerTopDelayZ:
    case DelayedModel::EulerTopDelayX: return 3;
    case DelayedModel::PendulumDelayH:
    case DelayedModel::PendulumDelayK: return 2;
  }
  return 0;
}

void DelayedSystem::validate() const {
  const bool pendulum =
      model == DelayedModel::PendulumDelayH || model == DelayedModel::PendulumDelayK;
  if (pendulum && (!(level > 0.0) || !std::isfinite(level))) {
    throw ConfigError("level", "delayed pendulum needs a positive level");
  }
}

DenseHistory::DenseHistory(double t0, double dt, std::span<const double> x0,
                           std::span<const double> dx0)
    : t0_(t0), dt_(dt), x0_(x0.begin(), x0.end()) {
  nodes_.push_back({t0, 0, x0_, {dx0.begin(), dx0.end()}});
}

void DenseHistory::append(double t, std::span<const double> x, std::span<const double> dx) {
  if (!(t > nodes_.back().t)) throw std::invalid_argument("history times must increase");
  nodes_.push_back({t, nodes_.back().index + 1, {x.begin(), x.end()}, {dx.begin(), dx.end()}});
}

void DenseHistory::discard_before(double t_min) {
  while (nodes_.size() > 2 && nodes_[1].t <= t_min) nodes_.pop_front();
}

void DenseHistory::lookup(double t, std::span<double> out) const {
  if (t <= t0_) {
    std::copy(x0_.begin(), x0_.end(), out.begin());
    return;
  }
  const double slack = kNodeSnap * dt_;
  if (t > nodes_.back().t + slack) {
    throw DomainError("delayed lookup at t = " + std::to_string(t) + " is ahead of the stored history");
  }
  if (t < nodes_.front().t - slack) {
    throw DomainError("delayed lookup at t = " + std::to_string(t) + " precedes the retained history");
  }

  const double pos = (t - t0_) / dt_;
  const double whole = std::round(pos);
  if (std::abs(pos - whole) <= kNodeSnap) {
    const auto idx = static_cast<std::size_t>(whole);
    const std::size_t first = nodes_.front().index;
    if (idx >= first && idx - first < nodes_.size()) {
      const Node& n = nodes_[idx - first];
      if (std::abs(n.t - t) <= slack) {
        std::copy(n.x.begin(), n.x.end(), out.begin());
        return;
      }
    }
  }

  auto hi = std::upper_bound(nodes_.begin(), nodes_.end(), t,
                             [](double v, const Node& n) { return v < n.t; });
  if (hi == nodes_.end()) {
    const Node& n = nodes_.back();
    std::copy(n.x.begin(), n.x.end(), out.begin());
    return;
  }
  if (hi == nodes_.begin()) ++hi;
  const Node& a = *(hi - 1);
  const Node& b = *hi;
  const double h = b.t - a.t;
  const double s = (t - a.t) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
  const double h10 = s3 - 2.0 * s2 + s;
  const double h01 = -2.0 * s3 + 3.0 * s2;
  const double h11 = s3 - s2;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = h00 * a.x[i] + h10 * h * a.dx[i] + h01 * b.x[i] + h11 * h * b.dx[i];
  }
}

PendulumState delayed_pendulum_rhs(double t, const PendulumState& s, double level,
                                   const DelaySpec& delay, const DenseHistory& history) {
  delay.validate();
  if (history.dim() != 2) throw std::invalid_argument("delayed_pendulum_rhs needs a pendulum history");
  double lagged[2];
  history.lookup(t - delay.tau, lagged);
  return {s.omega, -2.0 * level * std::sin(lagged[0])};
}

Trajectory integrate_dde(const DelayedSystem& sys, std::span<const double> x0,
                         const DelaySpec& delay, const GridSpec& grid, const DdeOptions& opts) {
  sys.validate();
  delay.validate();
  grid.validate();
  const std::size_t n = sys.dim();
  if (x0.size() != n) throw ConfigError("ic", "expected " + std::to_string(n) + " components");
  if (!all_finite(x0)) throw ConfigError("ic", "initial state must be finite");
  if (grid.dt > 0.25 * delay.tau * (1.0 + 1e-12)) {
    throw ConfigError("dt", "must not exceed tau/4 for the method of steps");
  }
  const std::size_t every = std::max<std::size_t>(1, opts.record_every);

  const DelayedField field = field_for(sys.model);
  const double level = sys.level;
  const double tau = delay.tau;
  const std::size_t steps = grid.steps();

  std::vector<double> x(x0.begin(), x0.end());
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n), lag_mid(n), lag_end(n);
  field(level, x, x, k1);  // history is constant, so the lagged state is x0
  DenseHistory history(grid.t0, grid.dt, x, k1);

  Trajectory traj(n);
  traj.reserve(steps / every + 2);
  traj.push(grid.t0, x);

  double t = grid.t0;
  for (std::size_t i = 0; i < steps; ++i) {
    const double t_next = (i + 1 == steps) ? grid.t1 : grid.t0 + static_cast<double>(i + 1) * grid.dt;
    const double h = t_next - t;

    // k1 is the derivative stored with the current node.
    history.lookup(t + 0.5 * h - tau, lag_mid);
    history.lookup(t_next - tau, lag_end);
    for (std::size_t c = 0; c < n; ++c) tmp[c] = x[c] + 0.5 * h * k1[c];
    field(level, tmp, lag_mid, k2);
    for (std::size_t c = 0; c < n; ++c) tmp[c] = x[c] + 0.5 * h * k2[c];
    field(level, tmp, lag_mid, k3);
    for (std::size_t c = 0; c < n; ++c) tmp[c] = x[c] + h * k3[c];
    field(level, tmp, lag_end, k4);
    for (std::size_t c = 0; c < n; ++c) {
      x[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
    }
    if (!all_finite(x)) throw IntegrationError("non-finite delayed state", t_next);

    field(level, x, lag_end, k1);
    history.append(t_next, x, k1);
    history.discard_before(t_next - tau - 2.0 * grid.dt);
    t = t_next;

    if ((i + 1) % every == 0 || i + 1 == steps) traj.push(t, x);
  }
  return traj;
}

}  // namespace pendulab
