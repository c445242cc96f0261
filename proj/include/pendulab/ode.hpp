#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pendulab/core.hpp"
#include "pendulab/trajectory.hpp"

namespace pendulab {

/// Fixed-step time grid on [t0, t1].
///
/// Nodes are t0 + i·dt; when dt does not divide the span, one shortened
/// final step lands exactly on t1.
struct GridSpec {
  double t0 = 0.0;
  double t1 = 1.0;
  double dt = 1e-3;

  static constexpr double kMaxSteps = 1e8;

  /// Throws ConfigError naming the bad field.
  void validate() const;
  std::size_t steps() const;
  /// True when dt divides t1 − t0 (no shortened final step).
  bool uniform() const;
  std::vector<double> nodes() const;
};

/// Classical four-stage Runge–Kutta on flat state vectors.
///
/// Owns its stage buffers so repeated steps do not allocate.
class Rk4Stepper {
 public:
  explicit Rk4Stepper(std::size_t dim);

  /// Advances `x` in place from t to t + dt. Throws IntegrationError on a
  /// non-finite stage value.
  void step(const VectorField& f, double t, std::span<double> x, double dt);

 private:
  std::vector<double> k1_, k2_, k3_, k4_, tmp_;
};

std::vector<double> rk4_step(const VectorField& f, double t, std::span<const double> x, double dt);

/// Integrates on every node of `grid`, including t0 and t1.
Trajectory integrate(const VectorField& f, std::span<const double> x0, const GridSpec& grid);

/// max_i |q(x(t_i)) − q(x(t_0))| over a trajectory of Euler top states.
double conservation_drift(const Trajectory& traj, Quantity q);

}  // namespace pendulab
