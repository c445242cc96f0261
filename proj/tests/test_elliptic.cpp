#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/ellint_1.hpp>
#include <boost/math/special_functions/jacobi_elliptic.hpp>

#include "pendulab/elliptic.hpp"
#include "pendulab/error.hpp"

using namespace pendulab;

namespace {

double quadrature_K(double k) {
  auto f = [k](double th) { return 1.0 / std::sqrt(1.0 - k * k * std::sin(th) * std::sin(th)); };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, std::numbers::pi / 2,
                                                                        15, 1e-15);
}

}  // namespace

TEST_CASE("modulus domain") {
  CHECK_NOTHROW(Modulus{0.0});
  CHECK_NOTHROW(Modulus{1.0});
  CHECK_THROWS_AS(Modulus{-0.1}, DomainError);
  CHECK_THROWS_AS(Modulus{1.0000001}, DomainError);
  CHECK_THROWS_AS(Modulus{std::nan("")}, DomainError);
  CHECK(Modulus{0.6}.complement() == doctest::Approx(0.8).epsilon(1e-15));
}

TEST_CASE("complete elliptic integral") {
  CHECK(complete_K(Modulus{0.0}) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));

  const double k = std::sqrt(0.5);
  const double oracle = quadrature_K(k);
  CHECK(std::abs(complete_K(Modulus{k}) - oracle) <= 1e-12);
  // Γ(1/4)² / (4√π)
  CHECK(std::abs(oracle - std::tgamma(0.25) * std::tgamma(0.25) / (4.0 * std::sqrt(std::numbers::pi))) <= 1e-13);

  const double near = complete_K(Modulus{0.999999});
  CHECK(std::isfinite(near));
  CHECK(near > complete_K(Modulus{0.9999}));
  CHECK_THROWS_AS(complete_K(Modulus{1.0}), DomainError);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 0.99);
  for (int i = 0; i < 50; ++i) {
    const double kk = u(rng);
    CHECK(complete_K(Modulus{kk}) == doctest::Approx(boost::math::ellint_1(kk)).epsilon(1e-14));
  }
}

TEST_CASE("jacobi functions at special moduli") {
  for (double k : {0.0, 0.3, 0.9, 1.0}) {
    const JacobiValues j = jacobi_sn_cn_dn(0.0, Modulus{k});
    CHECK(j.sn == 0.0);
    CHECK(j.cn == 1.0);
    CHECK(j.dn == 1.0);
  }
  const JacobiValues trig = jacobi_sn_cn_dn(1.3, Modulus{0.0});
  CHECK(trig.sn == doctest::Approx(std::sin(1.3)).epsilon(1e-15));
  CHECK(trig.cn == doctest::Approx(std::cos(1.3)).epsilon(1e-15));
  CHECK(trig.dn == 1.0);
  const JacobiValues hyp = jacobi_sn_cn_dn(0.7, Modulus{1.0});
  CHECK(hyp.sn == doctest::Approx(std::tanh(0.7)).epsilon(1e-15));
  CHECK(hyp.cn == doctest::Approx(1.0 / std::cosh(0.7)).epsilon(1e-15));
  CHECK(hyp.dn == doctest::Approx(1.0 / std::cosh(0.7)).epsilon(1e-15));
  CHECK_THROWS_AS(jacobi_sn_cn_dn(INFINITY, Modulus{0.5}), DomainError);
}

TEST_CASE("jacobi functions against an independent implementation") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ku(0.0, 0.999);
  std::uniform_real_distribution<double> uu(-20.0, 20.0);
  for (int i = 0; i < 1000; ++i) {
    const double k = ku(rng), u = uu(rng);
    double cn = 0, dn = 0;
    const double sn = boost::math::jacobi_elliptic(k, u, &cn, &dn);
    const JacobiValues j = jacobi_sn_cn_dn(u, Modulus{k});
    INFO("k=" << k << " u=" << u);
    CHECK(std::abs(j.sn - sn) <= 1e-12);
    CHECK(std::abs(j.cn - cn) <= 1e-12);
    CHECK(std::abs(j.dn - dn) <= 1e-12);
  }
}

TEST_CASE("pythagorean identities") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> ku(0.0, 1.0);
  std::uniform_real_distribution<double> uu(-50.0, 50.0);
  for (int i = 0; i < 1000; ++i) {
    const double k = ku(rng), u = uu(rng);
    const JacobiValues j = jacobi_sn_cn_dn(u, Modulus{k});
    CHECK(std::abs(j.cn * j.cn - (1.0 - j.sn * j.sn)) <= 1e-12);
    CHECK(std::abs(j.dn * j.dn - (1.0 - k * k * j.sn * j.sn)) <= 1e-12);
  }
}

TEST_CASE("derivative identity and periodicity") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> ku(0.0, 0.99);
  std::uniform_real_distribution<double> uu(-5.0, 5.0);
  const double h = 1e-5;
  for (int i = 0; i < 200; ++i) {
    const Modulus k{ku(rng)};
    const double u = uu(rng);
    const JacobiValues j = jacobi_sn_cn_dn(u, k);
    const double fd = (jacobi_sn_cn_dn(u + h, k).sn - jacobi_sn_cn_dn(u - h, k).sn) / (2 * h);
    CHECK(std::abs(fd - j.cn * j.dn) <= 1e-6);

    const double K = complete_K(k);
    CHECK(std::abs(jacobi_sn_cn_dn(u + 4 * K, k).sn - j.sn) <= 1e-10);
    CHECK(std::abs(jacobi_sn_cn_dn(u + 2 * K, k).dn - j.dn) <= 1e-10);
  }
}
