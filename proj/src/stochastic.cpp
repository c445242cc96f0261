#include "pendulab/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>

#include "pendulab/core.hpp"
#include "pendulab/error.hpp"

namespace pendulab {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kBridgeSalt = 0x62726964676521ULL;

std::vector<double> draw_increments(std::uint64_t seed, std::size_t steps, double dt,
                                    std::size_t dims) {
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(dt));
  std::vector<double> inc(steps * dims);
  for (std::size_t i = 0; i < steps; ++i) {
    for (std::size_t j = 0; j < dims; ++j) inc[j * steps + i] = normal(engine);
  }
  return inc;
}

/// Splits `coarse` into a + b with fl(a + b) == coarse.
void split_exact(double coarse, double a, double& out_a, double& out_b) {
  double b = coarse - a;
  constexpr double inf = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 64 && a + b != coarse; ++i) {
    b = std::nextafter(b, a + b < coarse ? inf : -inf);
  }
  if (a + b != coarse) {
    a = 0.5 * coarse;
    b = coarse - a;
  }
  out_a = a;
  out_b = b;
}

void require_interpretation(const SdeSpec& spec, Scheme scheme) {
  const bool wants_ito = scheme != Scheme::StratonovichHeun;
  const bool is_ito = spec.interpretation() == Interpretation::Ito;
  if (wants_ito != is_ito) {
    throw ConfigError("scheme", std::string(to_string(scheme)) + " does not apply to a " +
                                    std::string(to_string(spec.interpretation())) + " spec");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Wiener paths

WienerPath::WienerPath(std::uint64_t seed, std::size_t steps, double dt, std::size_t dims)
    : WienerPath(seed, steps, dt, dims, draw_increments(seed, steps, dt, dims)) {}

WienerPath::WienerPath(std::uint64_t seed, std::size_t steps, double dt, std::size_t dims,
                       std::vector<double> increments)
    : seed_(seed), steps_(steps), dt_(dt), dims_(dims), increments_(std::move(increments)) {
  if (steps == 0) throw std::invalid_argument("Wiener path needs at least one step");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("Wiener path needs dt > 0");
  if (dims == 0) throw std::invalid_argument("Wiener path needs at least one component");
}

double WienerPath::value(std::size_t component, std::size_t node) const {
  if (component >= dims_ || node > steps_) throw std::out_of_range("Wiener path index");
  double w = 0.0;
  for (std::size_t i = 0; i < node; ++i) w += increment(component, i);
  return w;
}

WienerPath WienerPath::refined() const {
  const std::uint64_t fine_seed = splitmix64(seed_ ^ kBridgeSalt);
  std::mt19937_64 engine(fine_seed);
  // Conditional on the sum, the first half is N(ΔW/2, dt/4).
  std::normal_distribution<double> normal(0.0, std::sqrt(0.25 * dt_));
  const std::size_t fine_steps = 2 * steps_;
  std::vector<double> fine(fine_steps * dims_);
  for (std::size_t i = 0; i < steps_; ++i) {
    for (std::size_t j = 0; j < dims_; ++j) {
      const double coarse = increment(j, i);
      split_exact(coarse, 0.5 * coarse + normal(engine), fine[j * fine_steps + 2 * i],
                  fine[j * fine_steps + 2 * i + 1]);
    }
  }
  return WienerPath(fine_seed, fine_steps, 0.5 * dt_, dims_, std::move(fine));
}

WienerPath WienerPath::coarsened(std::size_t factor) const {
  if (factor == 0 || steps_ % factor != 0) {
    throw std::invalid_argument("coarsening factor must divide the step count");
  }
  const std::size_t coarse_steps = steps_ / factor;
  std::vector<double> coarse(coarse_steps * dims_);
  for (std::size_t j = 0; j < dims_; ++j) {
    for (std::size_t i = 0; i < coarse_steps; ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k < factor; ++k) s += increment(j, i * factor + k);
      coarse[j * coarse_steps + i] = s;
    }
  }
  return WienerPath(seed_, coarse_steps, dt_ * static_cast<double>(factor), dims_, std::move(coarse));
}

WienerPath generate_wiener(std::uint64_t seed, std::size_t steps, double dt, std::size_t dims) {
  return WienerPath(seed, steps, dt, dims);
}

std::uint64_t path_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

// ---------------------------------------------------------------------------
// Specs

std::string_view to_string(Interpretation i) {
  return i == Interpretation::Ito ? "ito" : "strat";
}

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::EulerMaruyama: return "em";
    case Scheme::Milstein: return "milstein";
    case Scheme::StratonovichHeun: return "heun";
  }
  return "?";
}

ScalarDiffusion ScalarDiffusion::constant(double c) {
  return {[c](double) { return c; }, [](double) { return 0.0; }, false};
}

ScalarDiffusion ScalarDiffusion::linear(double c) {
  return {[c](double x) { return c * x; }, [c](double) { return c; }, false};
}

ScalarDiffusion ScalarDiffusion::square_root() {
  return {[](double x) { return x > 0.0 ? std::sqrt(x) : 0.0; },
          [](double x) { return x > 0.0 ? 0.5 / std::sqrt(x) : 0.0; }, true};
}

SdeSpec::SdeSpec(DriftFn drift, std::vector<std::optional<ScalarDiffusion>> noise,
                 Interpretation interpretation)
    : base_(std::move(drift)), noise_(std::move(noise)), interpretation_(interpretation) {
  if (!base_) throw std::invalid_argument("SDE spec needs a drift");
  if (noise_.empty()) throw std::invalid_argument("SDE spec needs at least one component");
  for (const auto& n : noise_) {
    if (n && !n->g) throw std::invalid_argument("driven component lacks a diffusion function");
  }
}

double SdeSpec::diffusion(std::size_t i, double xi) const {
  return noise_[i] ? noise_[i]->g(xi) : 0.0;
}

double SdeSpec::diffusion_slope(std::size_t i, double xi) const {
  if (!noise_[i]) return 0.0;
  if (!noise_[i]->slope) {
    throw std::invalid_argument("component " + std::to_string(i) + " lacks its diffusion partial");
  }
  return noise_[i]->slope(xi);
}

void SdeSpec::correction(std::span<const double> x, std::span<double> out) const {
  for (std::size_t i = 0; i < dim(); ++i) {
    out[i] = noise_[i] ? 0.5 * diffusion(i, x[i]) * diffusion_slope(i, x[i]) : 0.0;
  }
}

void SdeSpec::drift(std::span<const double> x, std::span<double> out) const {
  base_(x, out);
  if (correction_multiple_ == 0) return;
  const double m = static_cast<double>(correction_multiple_);
  for (std::size_t i = 0; i < dim(); ++i) {
    if (noise_[i]) out[i] -= m * 0.5 * diffusion(i, x[i]) * diffusion_slope(i, x[i]);
  }
}

double SdeSpec::partial_mismatch(std::span<const double> x, double h) const {
  double worst = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (!noise_[i]) continue;
    const double fd = (diffusion(i, x[i] + h) - diffusion(i, x[i] - h)) / (2.0 * h);
    worst = std::max(worst, std::abs(fd - diffusion_slope(i, x[i])));
  }
  return worst;
}

SdeSpec to_stratonovich(const SdeSpec& ito) {
  if (ito.interpretation() != Interpretation::Ito) {
    throw std::invalid_argument("to_stratonovich expects an Ito spec");
  }
  std::vector<double> probe(ito.dim(), 1.0), out(ito.dim());
  ito.correction(probe, out);  // surfaces missing partials eagerly
  SdeSpec s = ito;
  s.interpretation_ = Interpretation::Stratonovich;
  s.correction_multiple_ += 1;
  return s;
}

SdeSpec to_ito(const SdeSpec& strat) {
  if (strat.interpretation() != Interpretation::Stratonovich) {
    throw std::invalid_argument("to_ito expects a Stratonovich spec");
  }
  std::vector<double> probe(strat.dim(), 1.0), out(strat.dim());
  strat.correction(probe, out);
  SdeSpec s = strat;
  s.interpretation_ = Interpretation::Ito;
  s.correction_multiple_ -= 1;
  return s;
}

DriftFn strat_drift(const SdeSpec& ito) {
  return [s = to_stratonovich(ito)](std::span<const double> x, std::span<double> out) {
    s.drift(x, out);
  };
}

DriftFn ito_drift(const SdeSpec& strat) {
  return [s = to_ito(strat)](std::span<const double> x, std::span<double> out) { s.drift(x, out); };
}

std::string_view to_string(SdeModel m) {
  switch (m) {
    case SdeModel::EulerTopSdeA: return "euler-top-sde-a";
    case SdeModel::EulerTopSdeB: return "euler-top-sde-b";
    case SdeModel::PendulumSde: return "pendulum-sde";
  }
  return "?";
}

SdeSpec make_sde(SdeModel model, double level) {
  auto euler = [](std::span<const double> x, std::span<double> out) {
    out[0] = x[1] * x[2];
    out[1] = -x[0] * x[2];
    out[2] = x[0] * x[1];
  };
  switch (model) {
    case SdeModel::EulerTopSdeA:
      return SdeSpec(euler, {ScalarDiffusion::linear(1.0), std::nullopt, ScalarDiffusion::constant(1.0)});
    case SdeModel::EulerTopSdeB:
      return SdeSpec(euler, {ScalarDiffusion::square_root(), ScalarDiffusion::square_root(),
                             ScalarDiffusion::square_root()});
    case SdeModel::PendulumSde: {
      if (!(level > 0.0) || !std::isfinite(level)) throw ConfigError("level", "must be positive");
      auto pendulum = [level](std::span<const double> x, std::span<double> out) {
        out[0] = x[1];
        out[1] = -2.0 * level * std::sin(x[0]);
      };
      return SdeSpec(pendulum, {ScalarDiffusion::square_root(), ScalarDiffusion::square_root()});
    }
  }
  throw std::invalid_argument("unknown SDE model");
}

// ---------------------------------------------------------------------------
// Steppers

SdeStepper::SdeStepper(const SdeSpec& spec)
    : spec_(&spec), f_(spec.dim()), f2_(spec.dim()), pred_(spec.dim()), gx_(spec.dim()) {}

double SdeStepper::g(std::size_t i, double xi) {
  const auto& n = spec_->noise(i);
  if (!n) return 0.0;
  if (n->truncating && xi < 0.0) ++truncations_;
  return n->g(xi);
}

void SdeStepper::em(std::span<double> x, std::span<const double> dW, double dt) {
  spec_->drift(x, f_);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] += f_[i] * dt + g(i, x[i]) * dW[i];
  }
}

void SdeStepper::milstein(std::span<double> x, std::span<const double> dW, double dt) {
  spec_->drift(x, f_);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!spec_->driven(i)) {
      x[i] += f_[i] * dt;
      continue;
    }
    const double xi = x[i];
    const double gi = g(i, xi);
    const double slope = spec_->diffusion_slope(i, xi);
    x[i] += f_[i] * dt + gi * dW[i] + 0.5 * gi * slope * (dW[i] * dW[i] - dt);
  }
}

void SdeStepper::heun(std::span<double> x, std::span<const double> dW, double dt) {
  const std::size_t n = x.size();
  spec_->drift(x, f_);
  for (std::size_t i = 0; i < n; ++i) {
    gx_[i] = g(i, x[i]);
    pred_[i] = x[i] + f_[i] * dt + gx_[i] * dW[i];
  }
  spec_->drift(pred_, f2_);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] += 0.5 * (f_[i] + f2_[i]) * dt + 0.5 * (gx_[i] + g(i, pred_[i])) * dW[i];
  }
}

void SdeStepper::step(Scheme scheme, std::span<double> x, std::span<const double> dW, double dt) {
  switch (scheme) {
    case Scheme::EulerMaruyama: em(x, dW, dt); return;
    case Scheme::Milstein: milstein(x, dW, dt); return;
    case Scheme::StratonovichHeun: heun(x, dW, dt); return;
  }
}

namespace {

std::vector<double> single_step(const SdeSpec& spec, Scheme scheme, std::span<const double> x,
                                std::span<const double> dW, double dt) {
  require_interpretation(spec, scheme);
  if (x.size() != spec.dim() || dW.size() != spec.dim()) {
    throw std::invalid_argument("SDE step: dimension mismatch");
  }
  std::vector<double> out(x.begin(), x.end());
  SdeStepper(spec).step(scheme, out, dW, dt);
  return out;
}

}  // namespace

std::vector<double> em_step(const SdeSpec& spec, std::span<const double> x,
                            std::span<const double> dW, double dt) {
  return single_step(spec, Scheme::EulerMaruyama, x, dW, dt);
}

std::vector<double> milstein_step(const SdeSpec& spec, std::span<const double> x,
                                  std::span<const double> dW, double dt) {
  return single_step(spec, Scheme::Milstein, x, dW, dt);
}

std::vector<double> heun_strat_step(const SdeSpec& spec, std::span<const double> x,
                                    std::span<const double> dW, double dt) {
  return single_step(spec, Scheme::StratonovichHeun, x, dW, dt);
}

namespace {

/// Runs one path; calls `visit(node, state)` at every node.
template <typename Visit>
std::size_t run_path(const SdeSpec& spec, std::span<const double> x0, const WienerPath& path,
                     Scheme scheme, double t0, Visit&& visit) {
  const std::size_t n = spec.dim();
  std::vector<double> x(x0.begin(), x0.end());
  std::vector<double> dW(n);
  SdeStepper stepper(spec);
  visit(std::size_t{0}, std::span<const double>(x));
  for (std::size_t i = 0; i < path.steps(); ++i) {
    for (std::size_t c = 0; c < n; ++c) dW[c] = path.increment(c, i);
    stepper.step(scheme, x, dW, path.dt());
    if (!all_finite(x)) {
      throw IntegrationError("non-finite SDE state", t0 + static_cast<double>(i + 1) * path.dt());
    }
    visit(i + 1, std::span<const double>(x));
  }
  return stepper.truncations();
}

void check_dims(const SdeSpec& spec, std::span<const double> x0, const WienerPath& path) {
  if (x0.size() != spec.dim()) throw std::invalid_argument("SDE initial state has the wrong dimension");
  if (path.dims() != spec.dim()) throw std::invalid_argument("Wiener path dimension does not match the spec");
  if (!all_finite(x0)) throw DomainError("SDE initial state must be finite");
}

}  // namespace

Trajectory integrate_sde(const SdeSpec& spec, std::span<const double> x0, double t0,
                         const WienerPath& path, Scheme scheme, SdeDiagnostics* diag) {
  check_dims(spec, x0, path);
  require_interpretation(spec, scheme);
  Trajectory traj(spec.dim());
  traj.reserve(path.steps() + 1);
  const std::size_t trunc = run_path(spec, x0, path, scheme, t0, [&](std::size_t i, std::span<const double> x) {
    traj.push(t0 + static_cast<double>(i) * path.dt(), x);
  });
  if (diag) diag->truncations = trunc;
  return traj;
}

// ---------------------------------------------------------------------------
// Ensembles

EnsembleStats ensemble(const SdeSpec& spec, std::span<const double> x0, std::size_t paths,
                       std::uint64_t master_seed, const GridSpec& grid, Scheme scheme,
                       unsigned threads) {
  if (paths < 2) throw ConfigError("paths", "an ensemble needs at least 2 paths");
  grid.validate();
  if (!grid.uniform()) throw ConfigError("dt", "SDE grids need dt dividing t1 - t0");
  require_interpretation(spec, scheme);
  if (x0.size() != spec.dim()) throw ConfigError("ic", "initial state has the wrong dimension");

  const std::size_t n = spec.dim();
  const std::size_t steps = grid.steps();
  const std::size_t nodes = steps + 1;
  const std::size_t cells = nodes * n;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());

  EnsembleStats st;
  st.dim = n;
  st.paths = paths;
  st.times = grid.nodes();
  st.mean.assign(cells, 0.0);
  st.second_moment.assign(cells, 0.0);
  std::vector<double> m2(cells, 0.0);  // Welford sum of squared deviations

  const std::size_t block = std::max<std::size_t>(64, 16 * threads);
  std::vector<std::vector<double>> slots(std::min(block, paths), std::vector<double>(cells));

  for (std::size_t first = 0; first < paths; first += block) {
    const std::size_t count = std::min(block, paths - first);
    auto work = [&](unsigned tid) {
      for (std::size_t k = tid; k < count; k += threads) {
        const WienerPath path(path_seed(master_seed, first + k), steps, grid.dt, n);
        auto& slot = slots[k];
        run_path(spec, x0, path, scheme, grid.t0, [&](std::size_t i, std::span<const double> x) {
          std::copy(x.begin(), x.end(), slot.begin() + static_cast<std::ptrdiff_t>(i * n));
        });
      }
    };
    if (threads == 1) {
      work(0);
    } else {
      std::vector<std::jthread> pool;
      pool.reserve(threads);
      for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
    }
    // Ascending path order keeps the reduction independent of scheduling.
    for (std::size_t k = 0; k < count; ++k) {
      const double seen = static_cast<double>(first + k + 1);
      const auto& slot = slots[k];
      for (std::size_t c = 0; c < cells; ++c) {
        const double v = slot[c];
        const double delta = v - st.mean[c];
        st.mean[c] += delta / seen;
        m2[c] += delta * (v - st.mean[c]);
        st.second_moment[c] += (v * v - st.second_moment[c]) / seen;
      }
    }
  }

  const double M = static_cast<double>(paths);
  st.variance.resize(cells);
  st.half_width.resize(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    st.variance[c] = m2[c] / (M - 1.0);
    st.half_width[c] = 1.96 * std::sqrt(st.variance[c]) / std::sqrt(M);
  }
  return st;
}

// ---------------------------------------------------------------------------
// Convergence studies

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope needs 2+ pairs");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

namespace {

std::vector<double> end_state(const SdeSpec& spec, std::span<const double> x0,
                              const WienerPath& path, Scheme scheme, double t0) {
  std::vector<double> last(x0.begin(), x0.end());
  run_path(spec, x0, path, scheme, t0, [&](std::size_t i, std::span<const double> x) {
    if (i == path.steps()) std::copy(x.begin(), x.end(), last.begin());
  });
  return last;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

void check_setup(const SdeSpec& a, const SdeSpec& b, const ConvergenceSetup& setup) {
  if (a.dim() != b.dim() || setup.x0.size() != a.dim()) {
    throw std::invalid_argument("convergence study: dimension mismatch");
  }
  if (setup.levels.empty() || setup.paths == 0) throw std::invalid_argument("convergence study: empty setup");
  for (int l : setup.levels) {
    if (l < 0 || l > setup.fine_level) throw std::invalid_argument("convergence level above the fine level");
  }
}

template <typename PerPath>
ConvergenceStudy study(const ConvergenceSetup& setup, std::size_t dim, PerPath&& per_path) {
  const std::size_t fine_steps = std::size_t{1} << setup.fine_level;
  const double fine_dt = setup.horizon / static_cast<double>(fine_steps);
  std::vector<double> sums(setup.levels.size(), 0.0);
  for (std::size_t p = 0; p < setup.paths; ++p) {
    const WienerPath fine(path_seed(setup.master_seed, p), fine_steps, fine_dt, dim);
    per_path(fine, sums);
  }
  ConvergenceStudy out;
  for (std::size_t l = 0; l < setup.levels.size(); ++l) {
    out.dts.push_back(setup.horizon / static_cast<double>(std::size_t{1} << setup.levels[l]));
    out.errors.push_back(std::sqrt(sums[l] / static_cast<double>(setup.paths)));
  }
  out.slope = loglog_slope(out.dts, out.errors);
  return out;
}

}  // namespace

ConvergenceStudy strong_convergence(const SdeSpec& spec, Scheme scheme, const SdeSpec& reference,
                                    Scheme reference_scheme, const ConvergenceSetup& setup) {
  check_setup(spec, reference, setup);
  require_interpretation(spec, scheme);
  require_interpretation(reference, reference_scheme);
  return study(setup, spec.dim(), [&](const WienerPath& fine, std::vector<double>& sums) {
    const auto ref = end_state(reference, setup.x0, fine, reference_scheme, setup.t0);
    for (std::size_t l = 0; l < setup.levels.size(); ++l) {
      const WienerPath coarse = fine.coarsened(std::size_t{1} << (setup.fine_level - setup.levels[l]));
      sums[l] += squared_distance(end_state(spec, setup.x0, coarse, scheme, setup.t0), ref);
    }
  });
}

ConvergenceStudy pathwise_gap(const SdeSpec& a, Scheme scheme_a, const SdeSpec& b, Scheme scheme_b,
                              const ConvergenceSetup& setup) {
  check_setup(a, b, setup);
  require_interpretation(a, scheme_a);
  require_interpretation(b, scheme_b);
  return study(setup, a.dim(), [&](const WienerPath& fine, std::vector<double>& sums) {
    for (std::size_t l = 0; l < setup.levels.size(); ++l) {
      const WienerPath coarse = fine.coarsened(std::size_t{1} << (setup.fine_level - setup.levels[l]));
      sums[l] += squared_distance(end_state(a, setup.x0, coarse, scheme_a, setup.t0),
                                  end_state(b, setup.x0, coarse, scheme_b, setup.t0));
    }
  });
}

}  // namespace pendulab
