#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "pendulab/core.hpp"
#include "pendulab/error.hpp"

using namespace pendulab;

TEST_CASE("euler top vector field") {
  const State3 d = euler_top_rhs({0.1, 0.1, 0.2});
  CHECK(d.x1 == doctest::Approx(0.02).epsilon(1e-15));
  CHECK(d.x2 == doctest::Approx(-0.02).epsilon(1e-15));
  CHECK(d.x3 == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(euler_top_rhs({1, 0, 1}) == State3{0, -1, 0});
  CHECK(euler_top_rhs({0, 0, 0}) == State3{0, 0, 0});
  CHECK_THROWS_AS(euler_top_rhs({std::nan(""), 0, 0}), DomainError);
}

TEST_CASE("pendulum vector field") {
  const auto simple = PendulumParams::simple(0.5);
  CHECK(pendulum_rhs(3.0, {0, 0}, simple) == PendulumState{0, 0});
  const PendulumState inverted = pendulum_rhs(0.0, {std::numbers::pi, 0}, simple);
  CHECK(inverted.theta == 0.0);
  CHECK(std::abs(inverted.omega) < 1e-15);
  const PendulumState quarter = pendulum_rhs(0.0, {std::numbers::pi / 2, 0}, simple);
  CHECK(quarter.omega == doctest::Approx(-1.0).epsilon(1e-15));

  SUBCASE("equilibrium with damping but no Coulomb term") {
    PendulumParams p = simple;
    p.damping = {0.0, 0.3, 0.2, 0.1};
    CHECK(pendulum_rhs(1.0, {0, 0}, p) == PendulumState{0, 0});
  }
  SUBCASE("Coulomb term uses sign(0) = 0") {
    PendulumParams p = simple;
    p.damping = {0.7};
    CHECK(pendulum_rhs(0.0, {0, 0}, p).omega == 0.0);
    CHECK(pendulum_rhs(0.0, {0, 2.0}, p).omega == doctest::Approx(-0.7));
    CHECK(pendulum_rhs(0.0, {0, -2.0}, p).omega == doctest::Approx(0.7));
  }
  SUBCASE("power-law damping") {
    PendulumParams p = PendulumParams::simple(0.0);
    p.damping = {0.0, 0.5, 0.25, 0.125};
    const double w = -1.5;
    // α_p·ω·|ω|^(p−1) for p = 1, 2, 3
    const double expected = -(0.5 * w + 0.25 * w * 1.5 + 0.125 * w * 1.5 * 1.5);
    CHECK(pendulum_rhs(0.0, {0, w}, p).omega == doctest::Approx(expected).epsilon(1e-14));
  }
  SUBCASE("harmonic forcing") {
    PendulumParams p = PendulumParams::simple(0.0);
    p.f1 = {2.0, 3.0, 0.5};
    p.f2 = {1.5, 0.5, -0.25};
    const double t = 0.7, th = 0.4;
    const double f1 = 2.0 * std::sin(3.0 * t + 0.5);
    const double f2 = 1.5 * std::sin(0.5 * t - 0.25);
    CHECK(pendulum_rhs(t, {th, 0.0}, p).omega ==
          doctest::Approx(-f1 * std::cos(th) - f2 * std::sin(th)).epsilon(1e-14));
  }
  SUBCASE("odd symmetry of the simple pendulum") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int i = 0; i < 200; ++i) {
      const PendulumState s{u(rng), u(rng)};
      const PendulumState a = pendulum_rhs(0.0, s, simple);
      const PendulumState b = pendulum_rhs(0.0, {-s.theta, -s.omega}, simple);
      CHECK(a.theta == -b.theta);
      CHECK(a.omega == -b.omega);
    }
  }
  CHECK_THROWS_AS(pendulum_rhs(0.0, {0, std::numeric_limits<double>::infinity()}, simple),
                  DomainError);
  PendulumParams bad = simple;
  bad.h = -1.0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad.h = 1.0;
  bad.damping = {std::nan("")};
  CHECK_THROWS_AS(pendulum_field(bad), DomainError);
}

TEST_CASE("conserved functionals") {
  CHECK(conserved(Quantity::H1, {0.1, 0.1, 0.2}) == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(conserved(Quantity::H3, {1, 5, 1}) == 0.0);
  CHECK(conserved(Quantity::C1, {0, 0.1, 0.2}) == doctest::Approx(0.025).epsilon(1e-15));
  for (Quantity q : kAllQuantities) CHECK(conserved(q, {0, 0, 0}) == 0.0);

  const State3 s{0.3, -1.2, 0.7};
  CHECK(conserved(Quantity::C1, s) == -conserved(Quantity::H2, s));
  CHECK(conserved(Quantity::C3, s) == 2.0 * conserved(Quantity::H1, s));
  CHECK(to_string(Quantity::C2) == "C2");
}

TEST_CASE("level constants") {
  const LevelConstants a = level_constants({0.1, 0.1, 0.2});
  CHECK(a.h == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(a.k == doctest::Approx(0.025).epsilon(1e-15));
  const LevelConstants z = level_constants({0, 0, 0});
  CHECK(z.h == 0.0);
  CHECK(z.k == 0.0);
  const LevelConstants d = level_constants({1, 0, 1});
  CHECK(d.h == 0.5);
  CHECK(d.k == 0.5);
}

namespace {

double dot(const State3& a, const State3& b) { return a.x1 * b.x1 + a.x2 * b.x2 + a.x3 * b.x3; }

}  // namespace

TEST_CASE("gradients annihilate the flow") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const double eps = std::numeric_limits<double>::epsilon();
  for (int i = 0; i < 1000; ++i) {
    const State3 s{u(rng), u(rng), u(rng)};
    const State3 f = euler_top_rhs(s);
    const double scale = std::abs(s.x1 * s.x2 * s.x3);
    for (Quantity q : {Quantity::H1, Quantity::H2, Quantity::H3, Quantity::C1, Quantity::C3}) {
      INFO(to_string(q));
      CHECK(std::abs(dot(conserved_gradient(q, s), f)) <= 4.0 * eps * scale);
    }
    // ½(x1² − x2²) is not invariant: its rate is 2·x1x2x3.
    CHECK(dot(conserved_gradient(Quantity::C2, s), f) ==
          doctest::Approx(2.0 * s.x1 * s.x2 * s.x3).epsilon(1e-12));
  }
}

TEST_CASE("gradient matches finite differences") {
  const State3 s{0.4, -0.9, 1.3};
  const double h = 1e-6;
  for (Quantity q : kAllQuantities) {
    const State3 g = conserved_gradient(q, s);
    const double d1 = (conserved(q, {s.x1 + h, s.x2, s.x3}) - conserved(q, {s.x1 - h, s.x2, s.x3})) / (2 * h);
    const double d2 = (conserved(q, {s.x1, s.x2 + h, s.x3}) - conserved(q, {s.x1, s.x2 - h, s.x3})) / (2 * h);
    const double d3 = (conserved(q, {s.x1, s.x2, s.x3 + h}) - conserved(q, {s.x1, s.x2, s.x3 - h})) / (2 * h);
    CHECK(g.x1 == doctest::Approx(d1).epsilon(1e-8));
    CHECK(g.x2 == doctest::Approx(d2).epsilon(1e-8));
    CHECK(g.x3 == doctest::Approx(d3).epsilon(1e-8));
  }
}

TEST_CASE("state conversions") {
  const std::array<double, 3> v{1, 2, 3};
  CHECK(State3::from(v) == State3{1, 2, 3});
  const std::array<double, 2> w{1, 2};
  CHECK_THROWS(State3::from(w));
  CHECK(PendulumState::from(w) == PendulumState{1, 2});
}
