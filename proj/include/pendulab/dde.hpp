#pragma once

#include <cstddef>
#include <deque>
#include <span>
#include <string_view>
#include <vector>

#include "pendulab/core.hpp"
#include "pendulab/ode.hpp"
#include "pendulab/trajectory.hpp"

namespace pendulab {

/// Constant delay τ > 0. The history on [t0 − τ, t0] is the initial state.
struct DelaySpec {
  double tau = 1.0;

  void validate() const;
};

enum class DelayedModel {
  EulerTopDelayZ,  ///< ẋ3(t) = x1(t−τ)·x2(t−τ); conserves H1
  EulerTopDelayX,  ///< ẋ1(t) = x2(t−τ)·x3(t−τ); conserves C1
  PendulumDelayH,  ///< θ'' + 2H sin θ(t−τ) = 0
  PendulumDelayK,  ///< θ'' + 2K sin θ(t−τ) = 0
};

std::string_view to_string(DelayedModel m);

struct DelayedSystem {
  DelayedModel model = DelayedModel::EulerTopDelayZ;
  double level = 0.0;  ///< H or K; used by the pendulum models only

  std::size_t dim() const;
  void validate() const;
};

/// Stored (t, x, ẋ) nodes with cubic Hermite interpolation between them.
///
/// Queries before the first node return the initial state. Queries that land
/// on a uniform-grid node (to 1e−9 of a step) return that node verbatim.
class DenseHistory {
 public:
  DenseHistory(double t0, double dt, std::span<const double> x0, std::span<const double> dx0);

  std::size_t dim() const noexcept { return x0_.size(); }
  double last_time() const noexcept { return nodes_.back().t; }

  void append(double t, std::span<const double> x, std::span<const double> dx);
  /// Drops nodes no longer reachable by queries at or after `t_min`.
  void discard_before(double t_min);

  /// Writes the state at time t into `out`. Throws DomainError when t is
  /// past the last stored node or before a discarded one.
  void lookup(double t, std::span<double> out) const;

 private:
  struct Node {
    double t;
    std::size_t index;
    std::vector<double> x;
    std::vector<double> dx;
  };

  double t0_;
  double dt_;
  std::vector<double> x0_;
  std::deque<Node> nodes_;
};

/// (ω, −2·level·sin θ(t − τ)).
PendulumState delayed_pendulum_rhs(double t, const PendulumState& s, double level,
                                   const DelaySpec& delay, const DenseHistory& history);

struct DdeOptions {
  /// Keep every n-th node (t0 and t1 are always kept).
  std::size_t record_every = 1;
};

/// Method of steps with RK4; delayed arguments come from the dense history.
///
/// Requires dt <= τ/4 so every delayed lookup falls on already-computed nodes.
Trajectory integrate_dde(const DelayedSystem& sys, std::span<const double> x0,
                         const DelaySpec& delay, const GridSpec& grid, const DdeOptions& opts = {});

}  // namespace pendulab
