#pragma once

#include <array>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "pendulab/trajectory.hpp"

namespace pendulab {

/// Point of the Euler top phase space.
struct State3 {
  double x1 = 0.0;
  double x2 = 0.0;
  double x3 = 0.0;

  std::array<double, 3> to_array() const { return {x1, x2, x3}; }
  static State3 from(std::span<const double> v);
  bool operator==(const State3&) const = default;
};

/// Pendulum angle (radians, never wrapped) and angular velocity.
struct PendulumState {
  double theta = 0.0;
  double omega = 0.0;

  std::array<double, 2> to_array() const { return {theta, omega}; }
  static PendulumState from(std::span<const double> v);
  bool operator==(const PendulumState&) const = default;
};

/// A·sin(ω t + φ); amplitude zero disables the signal.
struct Harmonic {
  double amplitude = 0.0;
  double frequency = 0.0;
  double phase = 0.0;

  double operator()(double t) const;
};

/// Damped, periodically forced pendulum
///   θ'' + 2h sinθ + f1(t) cosθ + f2(t) sinθ + Σ_p α_p θ'|θ'|^(p-1) = 0.
///
/// `damping[p]` is α_p. The p = 0 term is read as α_0·sign(θ') with
/// sign(0) = 0 (Coulomb friction).
struct PendulumParams {
  double h = 0.0;
  Harmonic f1;
  Harmonic f2;
  std::vector<double> damping;

  /// Unforced, undamped θ'' + 2h sinθ = 0.
  static PendulumParams simple(double h);
  void validate() const;
};

/// The six conserved functionals of the Euler top.
///
/// C1 equals -H2 identically; both tags are kept.
enum class Quantity { H1, H2, H3, C1, C2, C3 };

inline constexpr std::array<Quantity, 6> kAllQuantities = {
    Quantity::H1, Quantity::H2, Quantity::H3, Quantity::C1, Quantity::C2, Quantity::C3};

std::string_view to_string(Quantity q);

/// Level constants of a starting point in the "½ sum = level" convention.
struct LevelConstants {
  double h = 0.0;  ///< ½(x1² + x2²)
  double k = 0.0;  ///< ½(x2² + x3²)
};

/// ẋ1 = x2x3, ẋ2 = −x1x3, ẋ3 = x1x2. Throws DomainError on non-finite input.
State3 euler_top_rhs(const State3& s);

/// Returns (θ', θ''). Throws DomainError on non-finite input.
PendulumState pendulum_rhs(double t, const PendulumState& s, const PendulumParams& p);

double conserved(Quantity q, const State3& s);

/// Gradient of the functional; used by the cancellation property tests.
State3 conserved_gradient(Quantity q, const State3& s);

LevelConstants level_constants(const State3& s0);

/// Right-hand side of an ODE on flat state vectors: writes dx/dt into `out`.
using VectorField =
    std::function<void(double t, std::span<const double> x, std::span<double> out)>;

VectorField euler_top_field();
VectorField pendulum_field(PendulumParams params);

bool all_finite(std::span<const double> v);

}  // namespace pendulab
