#pragma once

#include <array>
#include <vector>

#include "pendulab/core.hpp"

namespace pendulab {

/// Sign choice (s1, s2, s3) for the sech/tanh/sech heteroclinic orbits.
///
/// Only patterns whose substitution residual vanishes identically are
/// accepted; those are exactly the ones with s1·s2·s3 = −1.
class SignPattern {
 public:
  /// Throws DomainError for entries other than ±1 or for a pattern that
  /// does not solve the Euler top.
  SignPattern(int s1, int s2, int s3);

  int s1() const noexcept { return s_[0]; }
  int s2() const noexcept { return s_[1]; }
  int s3() const noexcept { return s_[2]; }

  /// Coefficients of a²·sech·tanh, a²·sech², a²·sech·tanh left over after
  /// substituting the ansatz into ẋ1 − x2x3, ẋ2 + x1x3, ẋ3 − x1x2.
  static std::array<int, 3> residual_coefficients(int s1, int s2, int s3);
  /// All four admissible patterns, in lexicographic (+ before −) order.
  static std::vector<SignPattern> admissible();

 private:
  std::array<int, 3> s_;
};

/// (s1·a·sech(at), s2·a·tanh(at), s3·a·sech(at)), a = H√2.
///
/// Lies on x1² + x2² = x2² + x3² = 2H² for every t.
State3 heteroclinic(double H, double t, const SignPattern& p);

/// Elliptic Euler top orbit with x1² + x2² = 2H², x2² + x3² = 2K², 0 < H < K,
/// passing through (H√2, 0, K√2) at t = 0:
///   (H√2·cn(λt; k), −H√2·sn(λt; k), K√2·dn(λt; k)),  λ = K√2,  k = H/K.
///
/// x1 and x2 have period 4·K(k)/λ and x3 has period 2·K(k)/λ.
State3 jacobi_orbit(double H, double K, double t);

/// Fundamental periods {x1 and x2, x3} of `jacobi_orbit(H, K, ·)`.
std::array<double, 2> jacobi_orbit_periods(double H, double K);

/// θ(t) for θ'' + 2h sinθ = 0, θ(0) = θ0, θ'(0) = 0:
///   θ(t) = 2·asin(k·sn(K(k) − √(2h)·t; k)),  k = sin(θ0/2).
///
/// Requires θ0 ∈ (0, π) and h > 0.
double pendulum_analytic(double theta0, double h, double t);

}  // namespace pendulab
