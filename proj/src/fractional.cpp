#include "pendulab/fractional.hpp"

#include <cmath>
#include <string>

#include "pendulab/core.hpp"
#include "pendulab/error.hpp"

namespace pendulab {

namespace {

/// Memory-kernel tables for one Caputo order q on a grid of `steps` steps.
class Kernel {
 public:
  Kernel(double q, std::size_t steps, double dt)
      : q_(q),
        predictor_scale_(std::pow(dt, q) / std::tgamma(q + 1.0)),
        corrector_scale_(std::pow(dt, q) / std::tgamma(q + 2.0)),
        pw_(steps + 2),
        pw1_(steps + 2),
        db_(steps + 1),
        da_(steps + 1) {
    for (std::size_t k = 0; k < pw_.size(); ++k) {
      const double kd = static_cast<double>(k);
      pw_[k] = std::pow(kd, q);
      pw1_[k] = std::pow(kd, q + 1.0);
    }
    for (std::size_t k = 1; k <= steps; ++k) {
      db_[k] = pw_[k] - pw_[k - 1];
      da_[k] = pw1_[k + 1] - 2.0 * pw1_[k] + pw1_[k - 1];
    }
  }

  bool classical() const { return q_ == 1.0; }
  double order() const { return q_; }
  double predictor_scale() const { return predictor_scale_; }
  double corrector_scale() const { return corrector_scale_; }

  /// a_0 for the step producing y_n.
  double first_corrector(std::size_t n) const {
    return pw1_[n - 1] - (static_cast<double>(n) - 1.0 - q_) * pw_[n];
  }

  /// Σ_{j<n} db[n−j]·f_j and a_0 f_0 + Σ_{0<j<n} da[n−j]·f_j, ascending j.
  void sums(std::size_t n, const std::vector<double>& f, double& pred, double& corr) const {
    pred = 0.0;
    corr = first_corrector(n) * f[0];
    pred += db_[n] * f[0];
    for (std::size_t j = 1; j < n; ++j) {
      const std::size_t k = n - j;
      pred += db_[k] * f[j];
      corr += da_[k] * f[j];
    }
  }

 private:
  double q_;
  double predictor_scale_;
  double corrector_scale_;
  std::vector<double> pw_;
  std::vector<double> pw1_;
  std::vector<double> db_;
  std::vector<double> da_;
};

// Both mixed-order Euler tops share the classical right-hand side; only the
// component orders differ.
void euler_rhs(std::span<const double> x, std::span<double> out) {
  out[0] = x[1] * x[2];
  out[1] = -x[0] * x[2];
  out[2] = x[0] * x[1];
}

Trajectory integrate_euler(const MixedOrderSystem& sys, std::span<const double> x0,
                           const GridSpec& grid, std::size_t steps) {
  constexpr std::size_t n_comp = 3;
  const std::vector<double> orders = sys.orders();
  std::vector<Kernel> kernels;
  kernels.reserve(n_comp);
  for (double q : orders) kernels.emplace_back(q, q == 1.0 ? 0 : steps, grid.dt);

  std::vector<std::vector<double>> hist(n_comp, std::vector<double>(steps + 1));
  std::vector<double> x(x0.begin(), x0.end());
  std::vector<double> f(n_comp), pred(n_comp), fp(n_comp), corr_partial(n_comp);
  std::vector<double> running(n_comp, 0.0);  // order-1 components: Σ_{j<n} f_j

  euler_rhs(x, f);
  for (std::size_t c = 0; c < n_comp; ++c) hist[c][0] = f[c];

  Trajectory traj(n_comp);
  traj.reserve(steps + 1);
  traj.push(grid.t0, x);

  for (std::size_t n = 1; n <= steps; ++n) {
    const double t = grid.t0 + static_cast<double>(n) * grid.dt;
    for (std::size_t c = 0; c < n_comp; ++c) {
      const Kernel& kern = kernels[c];
      if (kern.classical()) {
        running[c] += hist[c][n - 1];
        pred[c] = x0[c] + grid.dt * running[c];
        // f_0 + 2·Σ_{0<j<n} f_j
        corr_partial[c] = 2.0 * running[c] - hist[c][0];
      } else {
        double ps = 0.0;
        double cs = 0.0;
        kern.sums(n, hist[c], ps, cs);
        pred[c] = x0[c] + kern.predictor_scale() * ps;
        corr_partial[c] = cs;
      }
    }
    if (!all_finite(pred)) throw IntegrationError("non-finite fractional prediction", t);
    euler_rhs(pred, fp);
    for (std::size_t c = 0; c < n_comp; ++c) {
      const Kernel& kern = kernels[c];
      const double scale = kern.classical() ? 0.5 * grid.dt : kern.corrector_scale();
      x[c] = x0[c] + scale * (corr_partial[c] + fp[c]);
    }
    if (!all_finite(x)) throw IntegrationError("non-finite fractional state", t);
    euler_rhs(x, f);
    for (std::size_t c = 0; c < n_comp; ++c) hist[c][n] = f[c];
    traj.push(n == steps ? grid.t1 : t, x);
  }
  return traj;
}

Trajectory integrate_pendulum(const MixedOrderSystem& sys, double theta0, double omega0,
                              const GridSpec& grid, std::size_t steps) {
  const double alpha = sys.alpha.value();
  const double level = sys.level;
  const Kernel angle(alpha + 1.0, steps, grid.dt);
  const Kernel rate(alpha, alpha == 1.0 ? 0 : steps, grid.dt);

  auto force = [level](double theta) { return -2.0 * level * std::sin(theta); };

  std::vector<double> hist(steps + 1);
  hist[0] = force(theta0);
  double running = 0.0;  // classical rate: Σ_{j<n} f_j

  Trajectory traj(2);
  traj.reserve(steps + 1);
  const double init[2] = {theta0, omega0};
  traj.push(grid.t0, init);

  for (std::size_t n = 1; n <= steps; ++n) {
    const double elapsed = static_cast<double>(n) * grid.dt;
    const double t = grid.t0 + elapsed;
    const double taylor = theta0 + omega0 * elapsed;

    double ps = 0.0;
    double cs = 0.0;
    angle.sums(n, hist, ps, cs);
    const double predicted = taylor + angle.predictor_scale() * ps;
    if (!std::isfinite(predicted)) throw IntegrationError("non-finite fractional prediction", t);
    const double theta = taylor + angle.corrector_scale() * (cs + force(predicted));
    if (!std::isfinite(theta)) throw IntegrationError("non-finite fractional state", t);
    hist[n] = force(theta);

    double omega = 0.0;
    if (rate.classical()) {
      running += hist[n - 1];
      omega = omega0 + 0.5 * grid.dt * (2.0 * running - hist[0] + hist[n]);
    } else {
      double rp = 0.0;
      double rc = 0.0;
      rate.sums(n, hist, rp, rc);
      omega = omega0 + rate.corrector_scale() * (rc + hist[n]);
    }
    const double state[2] = {theta, omega};
    traj.push(n == steps ? grid.t1 : t, state);
  }
  return traj;
}

}  // namespace

FractionalOrder::FractionalOrder(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha", "fractional order must lie in (0, 1]");
}

std::string_view to_string(FractionalModel m) {
  switch (m) {
    case FractionalModel::EulerTopFracZ: return "euler-top-frac-z";
    case FractionalModel::EulerTopFracX: return "euler-top-frac-x";
    case FractionalModel::PendulumFracH: return "pendulum-frac-h";
    case FractionalModel::PendulumFracK: return "pendulum-frac-k";
  }
  return "?";
}

bool MixedOrderSystem::is_pendulum() const {
  return model == FractionalModel::PendulumFracH || model == FractionalModel::PendulumFracK;
}

std::vector<double> MixedOrderSystem::orders() const {
  const double a = alpha.value();
  switch (model) {
    case FractionalModel::EulerTopFracZ: return {1.0, 1.0, a};
    case FractionalModel::EulerTopFracX: return {a, 1.0, 1.0};
    case FractionalModel::PendulumFracH:
    case FractionalModel::PendulumFracK: return {a + 1.0};
  }
  return {};
}

void MixedOrderSystem::validate() const {
  if (is_pendulum() && (!(level > 0.0) || !std::isfinite(level))) {
    throw ConfigError("level", "fractional pendulum needs a positive level");
  }
}

AbmWeights abm_weights(double alpha, std::size_t n, double dt) {
  if (!(alpha > 0.0)) throw DomainError("abm_weights: alpha must be positive");
  if (n == 0) throw DomainError("abm_weights: n must be at least 1");
  const Kernel k(alpha, n, dt);
  AbmWeights w;
  w.predictor.resize(n);
  w.corrector.resize(n + 1);
  std::vector<double> unit(n + 1, 0.0);
  // Extract weights by feeding unit impulses through the same kernel sums.
  for (std::size_t j = 0; j < n; ++j) {
    unit[j] = 1.0;
    double p = 0.0;
    double c = 0.0;
    k.sums(n, unit, p, c);
    w.predictor[j] = k.predictor_scale() * p;
    w.corrector[j] = k.corrector_scale() * c;
    unit[j] = 0.0;
  }
  w.corrector[n] = k.corrector_scale();
  return w;
}

Trajectory integrate_fractional(const MixedOrderSystem& sys, std::span<const double> x0,
                                const GridSpec& grid) {
  sys.validate();
  grid.validate();
  if (!grid.uniform()) throw ConfigError("dt", "fractional integration needs dt dividing t1 - t0");
  if (!all_finite(x0)) throw ConfigError("ic", "initial state must be finite");
  const std::size_t steps = grid.steps();

  if (sys.is_pendulum()) {
    if (x0.empty() || x0.size() > 2) {
      throw ConfigError("ic", "fractional pendulum takes theta0 and optionally omega0");
    }
    return integrate_pendulum(sys, x0[0], x0.size() == 2 ? x0[1] : 0.0, grid, steps);
  }
  if (x0.size() != 3) throw ConfigError("ic", "expected 3 components");
  return integrate_euler(sys, x0, grid, steps);
}

}  // namespace pendulab
