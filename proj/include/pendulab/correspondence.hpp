#pragma once

#include <cstddef>
#include <vector>

#include "pendulab/trajectory.hpp"

namespace pendulab {

enum class SurfaceAxis {
  H,  ///< ½(x1² + x2²) = level
  K,  ///< ½(x2² + x3²) = level
};

/// Level surface of one Euler top integral, with x²-sum = 2·level.
class LevelSurface {
 public:
  /// Throws DomainError unless level > 0.
  LevelSurface(SurfaceAxis axis, double level);

  SurfaceAxis axis() const noexcept { return axis_; }
  double level() const noexcept { return level_; }
  /// ½ of the squared pair that defines the surface.
  double evaluate(double x1, double x2, double x3) const;

 private:
  SurfaceAxis axis_;
  double level_;
};

/// Maps a pendulum trajectory (θ, ω) of θ'' + 2·level·sin θ = 0 onto the
/// Euler top:
///   H-surface: (√(2H) cos(θ/2), √(2H) sin(θ/2), −ω/2)
///   K-surface: (−ω/2, √(2K) sin(θ/2), √(2K) cos(θ/2))
Trajectory pendulum_to_euler(const Trajectory& pendulum, const LevelSurface& surface);

/// Inverse of pendulum_to_euler. θ comes from atan2 and is unwrapped to a
/// continuous branch starting in (−2π, 2π]; successive samples must differ
/// by less than π.
///
/// Throws ConstraintViolation if any node is off the surface by more than
/// `tolerance` or if the unwrapped angle jumps by π or more.
Trajectory euler_to_pendulum(const Trajectory& euler, const LevelSurface& surface,
                             double tolerance = 1e-6);

/// Which equations a residual report checks.
class ResidualModel {
 public:
  static ResidualModel euler_top() { return ResidualModel(false, 0.0); }
  /// θ' − ω and θ'' + 2·level·sin θ.
  static ResidualModel pendulum(double level) { return ResidualModel(true, level); }

  bool is_pendulum() const noexcept { return pendulum_; }
  double level() const noexcept { return level_; }

 private:
  ResidualModel(bool pendulum, double level) : pendulum_(pendulum), level_(level) {}
  bool pendulum_;
  double level_;
};

struct ResidualReport {
  std::vector<double> max_abs;  ///< per equation
  std::size_t nodes_checked = 0;

  double worst() const;
};

/// Max over interior nodes of |fourth-order central difference − rhs|.
/// Stencils that straddle a non-uniform spacing are skipped. Throws
/// std::invalid_argument with fewer than 5 nodes.
ResidualReport residual_report(const Trajectory& traj, const ResidualModel& model);

/// ½ω² − 2·level·cos θ at every node.
std::vector<double> pendulum_energy(const Trajectory& pendulum, double level);

}  // namespace pendulab
