#pragma once

namespace pendulab {

/// Elliptic modulus k with 0 <= k <= 1.
///
/// Everything in this library takes the modulus k, never the parameter
/// m = k². Callers holding m must pass Modulus{std::sqrt(m)}.
class Modulus {
 public:
  /// Throws DomainError unless 0 <= k <= 1.
  explicit Modulus(double k);

  double k() const noexcept { return k_; }
  /// Complementary modulus √(1 − k²), computed without cancellation.
  double complement() const noexcept;

 private:
  double k_;
};

/// Complete elliptic integral of the first kind K(k) = π / (2·AGM(1, k')).
///
/// Throws DomainError for k = 1 (logarithmic divergence).
double complete_K(Modulus k);

struct JacobiValues {
  double sn = 0.0;
  double cn = 1.0;
  double dn = 1.0;
};

/// sn, cn, dn by descending Landen (AGM) recursion.
///
/// k = 0 and k = 1 take the exact trigonometric and hyperbolic limits.
JacobiValues jacobi_sn_cn_dn(double u, Modulus k);

}  // namespace pendulab
