#include "pendulab/elliptic.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "pendulab/error.hpp"

namespace pendulab {

namespace {

constexpr int kMaxAgmIterations = 64;
constexpr double kAgmTolerance = 1e-15;

}  // namespace

Modulus::Modulus(double k) : k_(k) {
  if (!(k >= 0.0 && k <= 1.0)) throw DomainError("elliptic modulus must lie in [0, 1]");
}

double Modulus::complement() const noexcept { return std::sqrt((1.0 - k_) * (1.0 + k_)); }

double complete_K(Modulus k) {
  if (k.k() == 1.0) throw DomainError("complete_K diverges at k = 1");
  double a = 1.0;
  double b = k.complement();
  for (int i = 0; i < kMaxAgmIterations; ++i) {
    const double an = 0.5 * (a + b);
    const double bn = std::sqrt(a * b);
    const bool done = std::abs(an - bn) < kAgmTolerance * an;
    a = an;
    b = bn;
    if (done) break;
  }
  return std::numbers::pi / (a + b);  // π / (2·AGM)
}

JacobiValues jacobi_sn_cn_dn(double u, Modulus modulus) {
  if (!std::isfinite(u)) throw DomainError("jacobi_sn_cn_dn: non-finite argument");
  const double k = modulus.k();
  if (k == 0.0) return {std::sin(u), std::cos(u), 1.0};
  if (k == 1.0) {
    const double sech = 1.0 / std::cosh(u);
    return {std::tanh(u), sech, sech};
  }

  // Descending AGM: a_{n+1} = (a_n + b_n)/2, b_{n+1} = √(a_n b_n), c_{n+1} = (a_n − b_n)/2.
  std::array<double, kMaxAgmIterations + 1> a{};
  std::array<double, kMaxAgmIterations + 1> c{};
  a[0] = 1.0;
  c[0] = k;
  double b = modulus.complement();
  int n = 0;
  while (n < kMaxAgmIterations) {
    const double an = a[n];
    a[n + 1] = 0.5 * (an + b);
    c[n + 1] = 0.5 * (an - b);
    b = std::sqrt(an * b);
    ++n;
    if (std::abs(c[n]) < kAgmTolerance * a[n]) break;
  }

  // Back substitution φ_{n−1} = (φ_n + asin(c_n/a_n · sin φ_n)) / 2.
  double phi = std::ldexp(a[n] * u, n);
  for (int i = n; i > 0; --i) {
    phi = 0.5 * (phi + std::asin(c[i] / a[i] * std::sin(phi)));
  }
  const double sn = std::sin(phi);
  const double cn = std::cos(phi);
  // dn² = cn² + k'² sn²: both terms non-negative, so no cancellation near cn = 0.
  const double kc = modulus.complement();
  const double dn = std::sqrt(cn * cn + kc * kc * sn * sn);
  return {sn, cn, dn};
}

}  // namespace pendulab
