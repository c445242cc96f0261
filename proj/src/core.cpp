#include "pendulab/core.hpp"

#include <cmath>
#include <string>

#include "pendulab/error.hpp"

namespace pendulab {

namespace {

void require_finite(std::span<const double> v, const char* what) {
  if (!all_finite(v)) throw DomainError(std::string(what) + ": non-finite state");
}

double sign(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

bool all_finite(std::span<const double> v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

State3 State3::from(std::span<const double> v) {
  if (v.size() != 3) throw std::invalid_argument("State3 needs exactly 3 components");
  return {v[0], v[1], v[2]};
}

PendulumState PendulumState::from(std::span<const double> v) {
  if (v.size() != 2) throw std::invalid_argument("PendulumState needs exactly 2 components");
  return {v[0], v[1]};
}

double Harmonic::operator()(double t) const {
  if (amplitude == 0.0) return 0.0;
  return amplitude * std::sin(frequency * t + phase);
}

PendulumParams PendulumParams::simple(double h) {
  PendulumParams p;
  p.h = h;
  return p;
}

void PendulumParams::validate() const {
  const double scalars[] = {h,           f1.amplitude, f1.frequency, f1.phase,
                            f2.amplitude, f2.frequency, f2.phase};
  if (!all_finite(scalars) || !all_finite(damping)) {
    throw DomainError("pendulum parameters must be finite");
  }
  if (h < 0.0) throw DomainError("pendulum stiffness h must be non-negative");
}

std::string_view to_string(Quantity q) {
  switch (q) {
    case Quantity::H1: return "H1";
    case Quantity::H2: return "H2";
    case Quantity::H3: return "H3";
    case Quantity::C1: return "C1";
    case Quantity::C2: return "C2";
    case Quantity::C3: return "C3";
  }
  return "?";
}

State3 euler_top_rhs(const State3& s) {
  require_finite(s.to_array(), "euler_top_rhs");
  return {s.x2 * s.x3, -s.x1 * s.x3, s.x1 * s.x2};
}

PendulumState pendulum_rhs(double t, const PendulumState& s, const PendulumParams& p) {
  require_finite(s.to_array(), "pendulum_rhs");
  const double st = std::sin(s.theta);
  double accel = -2.0 * p.h * st;
  if (p.f1.amplitude != 0.0) accel -= p.f1(t) * std::cos(s.theta);
  if (p.f2.amplitude != 0.0) accel -= p.f2(t) * st;

  const double w = s.omega;
  const double aw = std::abs(w);
  double power = 1.0;  // |ω|^(p-1) for p >= 1
  for (std::size_t k = 0; k < p.damping.size(); ++k) {
    const double alpha = p.damping[k];
    if (k == 0) {
      accel -= alpha * sign(w);
      continue;
    }
    if (k > 1) power *= aw;
    accel -= alpha * w * power;
  }
  return {s.omega, accel};
}

double conserved(Quantity q, const State3& s) {
  require_finite(s.to_array(), "conserved");
  const double a = s.x1 * s.x1;
  const double b = s.x2 * s.x2;
  const double c = s.x3 * s.x3;
  switch (q) {
    case Quantity::H1: return 0.5 * (a + b);
    case Quantity::H2: return -0.5 * (b + c);
    case Quantity::H3: return a - c;
    case Quantity::C1: return 0.5 * (b + c);
    case Quantity::C2: return 0.5 * (a - b);
    case Quantity::C3: return a + b;
  }
  return 0.0;
}

State3 conserved_gradient(Quantity q, const State3& s) {
  switch (q) {
    case Quantity::H1: return {s.x1, s.x2, 0.0};
    case Quantity::H2: return {0.0, -s.x2, -s.x3};
    case Quantity::H3: return {2.0 * s.x1, 0.0, -2.0 * s.x3};
    case Quantity::C1: return {0.0, s.x2, s.x3};
    case Quantity::C2: return {s.x1, -s.x2, 0.0};
    case Quantity::C3: return {2.0 * s.x1, 2.0 * s.x2, 0.0};
  }
  return {};
}

LevelConstants level_constants(const State3& s0) {
  return {conserved(Quantity::H1, s0), conserved(Quantity::C1, s0)};
}

VectorField euler_top_field() {
  return [](double, std::span<const double> x, std::span<double> out) {
    out[0] = x[1] * x[2];
    out[1] = -x[0] * x[2];
    out[2] = x[0] * x[1];
  };
}

VectorField pendulum_field(PendulumParams params) {
  params.validate();
  return [p = std::move(params)](double t, std::span<const double> x, std::span<double> out) {
    const PendulumState d = pendulum_rhs(t, {x[0], x[1]}, p);
    out[0] = d.theta;
    out[1] = d.omega;
  };
}

}  // namespace pendulab
