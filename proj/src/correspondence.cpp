#include "pendulab/correspondence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pendulab/error.hpp"

namespace pendulab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double first_derivative(const double* f, double h) {
  return (f[-2] - 8.0 * f[-1] + 8.0 * f[1] - f[2]) / (12.0 * h);
}

double second_derivative(const double* f, double h) {
  return (-f[-2] + 16.0 * f[-1] - 30.0 * f[0] + 16.0 * f[1] - f[2]) / (12.0 * h * h);
}

}  // namespace

LevelSurface::LevelSurface(SurfaceAxis axis, double level) : axis_(axis), level_(level) {
  if (!(level > 0.0) || !std::isfinite(level)) throw DomainError("level surface needs level > 0");
}

double LevelSurface::evaluate(double x1, double x2, double x3) const {
  return axis_ == SurfaceAxis::H ? 0.5 * (x1 * x1 + x2 * x2) : 0.5 * (x2 * x2 + x3 * x3);
}

Trajectory pendulum_to_euler(const Trajectory& pendulum, const LevelSurface& surface) {
  if (pendulum.dim() != 2) throw std::invalid_argument("pendulum_to_euler expects (theta, omega) states");
  const double r = std::sqrt(2.0 * surface.level());
  Trajectory out(3);
  out.reserve(pendulum.size());
  for (std::size_t i = 0; i < pendulum.size(); ++i) {
    const auto s = pendulum.state(i);
    const double c = r * std::cos(0.5 * s[0]);
    const double sn = r * std::sin(0.5 * s[0]);
    const double spin = -0.5 * s[1];
    const double x[3] = {
        surface.axis() == SurfaceAxis::H ? c : spin,
        sn,
        surface.axis() == SurfaceAxis::H ? spin : c,
    };
    out.push(pendulum.time(i), x);
  }
  return out;
}

Trajectory euler_to_pendulum(const Trajectory& euler, const LevelSurface& surface, double tolerance) {
  if (euler.dim() != 3) throw std::invalid_argument("euler_to_pendulum expects Euler top states");

  std::size_t worst_node = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < euler.size(); ++i) {
    const auto x = euler.state(i);
    const double dev = std::abs(surface.evaluate(x[0], x[1], x[2]) - surface.level());
    if (dev > worst) {
      worst = dev;
      worst_node = i;
    }
  }
  if (worst > tolerance) throw ConstraintViolation("trajectory is off the level surface", worst_node, worst);

  Trajectory out(2);
  out.reserve(euler.size());
  double previous = 0.0;
  for (std::size_t i = 0; i < euler.size(); ++i) {
    const auto x = euler.state(i);
    const bool h_axis = surface.axis() == SurfaceAxis::H;
    // H: (x1, x2) = r(cos, sin)(θ/2); K: (x3, x2) = r(cos, sin)(θ/2).
    const double half = std::atan2(x[1], h_axis ? x[0] : x[2]);
    double theta = 2.0 * half;
    if (i > 0) {
      // θ/2 is known mod 2π, so θ mod 4π; pick the branch nearest the previous sample.
      const double period = 2.0 * kTwoPi;
      theta += period * std::round((previous - theta) / period);
      if (std::abs(theta - previous) >= std::numbers::pi) {
        throw ConstraintViolation("angle jumps by pi or more between samples", i,
                                  std::abs(theta - previous));
      }
    }
    previous = theta;
    const double omega = -2.0 * (h_axis ? x[2] : x[0]);
    const double s[2] = {theta, omega};
    out.push(euler.time(i), s);
  }
  return out;
}

double ResidualReport::worst() const {
  return max_abs.empty() ? 0.0 : *std::max_element(max_abs.begin(), max_abs.end());
}

ResidualReport residual_report(const Trajectory& traj, const ResidualModel& model) {
  if (traj.size() < 5) throw std::invalid_argument("residual_report needs at least 5 nodes");
  const std::size_t dim = traj.dim();
  if (model.is_pendulum() ? dim != 2 : dim != 3) {
    throw std::invalid_argument("residual_report: trajectory dimension does not match the model");
  }
  const auto& t = traj.times();
  std::vector<std::vector<double>> comp(dim);
  for (std::size_t c = 0; c < dim; ++c) comp[c] = traj.component(c);

  ResidualReport rep;
  rep.max_abs.assign(model.is_pendulum() ? 2 : 3, 0.0);
  for (std::size_t i = 2; i + 2 < traj.size(); ++i) {
    const double h = (t[i + 2] - t[i - 2]) / 4.0;
    bool uniform = true;
    for (std::size_t k = i - 2; k < i + 2; ++k) {
      if (std::abs((t[k + 1] - t[k]) - h) > 1e-9 * h) uniform = false;
    }
    if (!uniform) continue;
    ++rep.nodes_checked;

    if (model.is_pendulum()) {
      const double* th = comp[0].data() + i;
      const double omega = comp[1][i];
      const double r0 = first_derivative(th, h) - omega;
      const double r1 = second_derivative(th, h) + 2.0 * model.level() * std::sin(th[0]);
      rep.max_abs[0] = std::max(rep.max_abs[0], std::abs(r0));
      rep.max_abs[1] = std::max(rep.max_abs[1], std::abs(r1));
    } else {
      const double x1 = comp[0][i], x2 = comp[1][i], x3 = comp[2][i];
      const double rhs[3] = {x2 * x3, -x1 * x3, x1 * x2};
      for (std::size_t c = 0; c < 3; ++c) {
        const double r = first_derivative(comp[c].data() + i, h) - rhs[c];
        rep.max_abs[c] = std::max(rep.max_abs[c], std::abs(r));
      }
    }
  }
  return rep;
}

std::vector<double> pendulum_energy(const Trajectory& pendulum, double level) {
  if (pendulum.dim() != 2) throw std::invalid_argument("pendulum_energy expects (theta, omega) states");
  std::vector<double> e;
  e.reserve(pendulum.size());
  for (std::size_t i = 0; i < pendulum.size(); ++i) {
    const auto s = pendulum.state(i);
    e.push_back(0.5 * s[1] * s[1] - 2.0 * level * std::cos(s[0]));
  }
  return e;
}

}  // namespace pendulab
