#include "pendulab/analytic.hpp"

#include <cmath>
#include <numbers>

#include "pendulab/elliptic.hpp"
#include "pendulab/error.hpp"

namespace pendulab {

std::array<int, 3> SignPattern::residual_coefficients(int s1, int s2, int s3) {
  // d/dt sech(at) = −a sech·tanh, d/dt tanh(at) = a sech².
  return {-s1 - s2 * s3, s2 + s1 * s3, -s3 - s1 * s2};
}

SignPattern::SignPattern(int s1, int s2, int s3) : s_{s1, s2, s3} {
  for (int s : s_) {
    if (s != 1 && s != -1) throw DomainError("sign pattern entries must be +1 or -1");
  }
  for (int r : residual_coefficients(s1, s2, s3)) {
    if (r != 0) throw DomainError("sign pattern does not solve the Euler top");
  }
}

std::vector<SignPattern> SignPattern::admissible() {
  std::vector<SignPattern> out;
  for (int s1 : {1, -1}) {
    for (int s2 : {1, -1}) {
      for (int s3 : {1, -1}) {
        const auto r = residual_coefficients(s1, s2, s3);
        if (r[0] == 0 && r[1] == 0 && r[2] == 0) out.emplace_back(s1, s2, s3);
      }
    }
  }
  return out;
}

State3 heteroclinic(double H, double t, const SignPattern& p) {
  if (!(H > 0.0) || !std::isfinite(H)) throw DomainError("heteroclinic: H must be positive");
  const double a = H * std::numbers::sqrt2;
  const double sech = 1.0 / std::cosh(a * t);
  const double tanh = std::tanh(a * t);
  return {p.s1() * a * sech, p.s2() * a * tanh, p.s3() * a * sech};
}

namespace {

void check_levels(double H, double K) {
  if (!(H > 0.0) || !std::isfinite(H)) throw DomainError("jacobi_orbit: H must be positive");
  if (!(K > H) || !std::isfinite(K)) {
    throw DomainError("jacobi_orbit: requires K > H (use heteroclinic for H = K)");
  }
}

}  // namespace

State3 jacobi_orbit(double H, double K, double t) {
  check_levels(H, K);
  const double amp1 = H * std::numbers::sqrt2;
  const double amp3 = K * std::numbers::sqrt2;
  const JacobiValues j = jacobi_sn_cn_dn(amp3 * t, Modulus{H / K});
  return {amp1 * j.cn, -amp1 * j.sn, amp3 * j.dn};
}

std::array<double, 2> jacobi_orbit_periods(double H, double K) {
  check_levels(H, K);
  const double quarter = complete_K(Modulus{H / K}) / (K * std::numbers::sqrt2);
  return {4.0 * quarter, 2.0 * quarter};
}

double pendulum_analytic(double theta0, double h, double t) {
  if (!(theta0 > 0.0 && theta0 < std::numbers::pi)) {
    throw DomainError("pendulum_analytic: theta0 must lie in (0, pi)");
  }
  if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("pendulum_analytic: h must be positive");
  const Modulus k{std::sin(0.5 * theta0)};
  const double u = complete_K(k) - std::sqrt(2.0 * h) * t;
  return 2.0 * std::asin(k.k() * jacobi_sn_cn_dn(u, k).sn);
}

}  // namespace pendulab
