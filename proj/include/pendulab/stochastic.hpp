#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "pendulab/ode.hpp"
#include "pendulab/trajectory.hpp"

namespace pendulab {

/// Seeded Brownian increments, one row of `steps()` Normal(0, dt) samples
/// per independent component.
class WienerPath {
 public:
  /// Same (seed, steps, dt, dims) always yields the same increments.
  WienerPath(std::uint64_t seed, std::size_t steps, double dt, std::size_t dims);

  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t steps() const noexcept { return steps_; }
  std::size_t dims() const noexcept { return dims_; }
  double dt() const noexcept { return dt_; }

  double increment(std::size_t component, std::size_t step) const {
    return increments_[component * steps_ + step];
  }
  std::span<const double> increments(std::size_t component) const {
    return {increments_.data() + component * steps_, steps_};
  }
  /// W at node i (W(0) = 0), summed in ascending order.
  double value(std::size_t component, std::size_t node) const;

  /// Brownian-bridge refinement to dt/2. Each pair of fine increments sums
  /// back to its coarse increment exactly in floating point.
  WienerPath refined() const;
  /// Sums `factor` consecutive increments; `steps()` must be divisible by it.
  WienerPath coarsened(std::size_t factor) const;

 private:
  WienerPath(std::uint64_t seed, std::size_t steps, double dt, std::size_t dims,
             std::vector<double> increments);

  std::uint64_t seed_;
  std::size_t steps_;
  double dt_;
  std::size_t dims_;
  std::vector<double> increments_;
};

WienerPath generate_wiener(std::uint64_t seed, std::size_t steps, double dt, std::size_t dims);

/// Seed of path `index` in an ensemble keyed by `master`.
std::uint64_t path_seed(std::uint64_t master, std::uint64_t index);

enum class Interpretation { Ito, Stratonovich };
enum class Scheme { EulerMaruyama, Milstein, StratonovichHeun };

std::string_view to_string(Interpretation i);
std::string_view to_string(Scheme s);

/// Diffusion g(x_i) acting on component i alone, with its slope dg/dx_i.
struct ScalarDiffusion {
  std::function<double(double)> g;
  std::function<double(double)> slope;
  /// Square-root diffusions are evaluated at max(x, 0) (full truncation).
  bool truncating = false;

  static ScalarDiffusion constant(double c);
  static ScalarDiffusion linear(double c);
  static ScalarDiffusion square_root();
};

using DriftFn = std::function<void(std::span<const double> x, std::span<double> out)>;

/// dx = f(x) dt + Σ_i g_i(x_i) dW_i e_i with diagonal noise.
///
/// Interpretation conversions are kept symbolic: the drift is stored as the
/// original closed form plus an integer multiple of the correction
/// ½·g_i·∂g_i/∂x_i, so converting back and forth restores the original drift
/// bit for bit.
class SdeSpec {
 public:
  SdeSpec(DriftFn drift, std::vector<std::optional<ScalarDiffusion>> noise,
          Interpretation interpretation = Interpretation::Ito);

  std::size_t dim() const noexcept { return noise_.size(); }
  Interpretation interpretation() const noexcept { return interpretation_; }

  /// Drift in this spec's own interpretation.
  void drift(std::span<const double> x, std::span<double> out) const;
  bool driven(std::size_t i) const { return noise_[i].has_value(); }
  const std::optional<ScalarDiffusion>& noise(std::size_t i) const { return noise_[i]; }
  double diffusion(std::size_t i, double xi) const;
  double diffusion_slope(std::size_t i, double xi) const;

  /// ½·g_i·∂g_i/∂x_i per component. Throws std::invalid_argument when a
  /// driven component lacks its slope.
  void correction(std::span<const double> x, std::span<double> out) const;

  /// Largest |slope − centred difference of g| over driven components at x.
  double partial_mismatch(std::span<const double> x, double h = 1e-6) const;

  friend SdeSpec to_stratonovich(const SdeSpec& ito);
  friend SdeSpec to_ito(const SdeSpec& strat);

 private:
  DriftFn base_;
  std::vector<std::optional<ScalarDiffusion>> noise_;
  Interpretation interpretation_;
  int correction_multiple_ = 0;  // drift = base − multiple·correction
};

SdeSpec to_stratonovich(const SdeSpec& ito);
SdeSpec to_ito(const SdeSpec& strat);

/// Stratonovich-equivalent drift f − ½Σ g·∂g/∂x of an Itô spec.
DriftFn strat_drift(const SdeSpec& ito);
/// Inverse of strat_drift: f̲ + ½Σ g·∂g/∂x of a Stratonovich spec.
DriftFn ito_drift(const SdeSpec& strat);

enum class SdeModel {
  EulerTopSdeA,  ///< g = (x1, 0, 1): multiplicative on x1, additive on x3
  EulerTopSdeB,  ///< g = (√x1, √x2, √x3)
  PendulumSde,   ///< (θ, ω) with g = (√θ, √ω)
};

std::string_view to_string(SdeModel m);
/// Itô form of a built-in system; `level` is the pendulum's H.
SdeSpec make_sde(SdeModel model, double level = 0.5);

/// Allocation-free stepping for one path. Counts evaluations of a truncating
/// diffusion at a negative argument.
class SdeStepper {
 public:
  explicit SdeStepper(const SdeSpec& spec);

  void em(std::span<double> x, std::span<const double> dW, double dt);
  void milstein(std::span<double> x, std::span<const double> dW, double dt);
  void heun(std::span<double> x, std::span<const double> dW, double dt);
  void step(Scheme scheme, std::span<double> x, std::span<const double> dW, double dt);

  std::size_t truncations() const noexcept { return truncations_; }

 private:
  double g(std::size_t i, double xi);

  const SdeSpec* spec_;
  std::vector<double> f_, f2_, pred_, gx_;
  std::size_t truncations_ = 0;
};

/// Itô: x + f dt + Σ g dW.
std::vector<double> em_step(const SdeSpec& spec, std::span<const double> x,
                            std::span<const double> dW, double dt);
/// Itô: EM plus ½·g·g'·(dW² − dt) per driven component.
std::vector<double> milstein_step(const SdeSpec& spec, std::span<const double> x,
                                  std::span<const double> dW, double dt);
/// Stratonovich: EM predictor, then trapezoidal drift and diffusion.
std::vector<double> heun_strat_step(const SdeSpec& spec, std::span<const double> x,
                                    std::span<const double> dW, double dt);

struct SdeDiagnostics {
  std::size_t truncations = 0;
};

/// Trajectory on the path nodes t0 + i·dt. Throws std::invalid_argument on a
/// dimension mismatch and ConfigError when the scheme does not match the
/// spec's interpretation.
Trajectory integrate_sde(const SdeSpec& spec, std::span<const double> x0, double t0,
                         const WienerPath& path, Scheme scheme, SdeDiagnostics* diag = nullptr);

/// Per-node Monte Carlo moments, stored node-major ([node * dim + component]).
struct EnsembleStats {
  std::vector<double> times;
  std::size_t dim = 0;
  std::size_t paths = 0;
  std::vector<double> mean;
  std::vector<double> second_moment;
  std::vector<double> variance;    ///< unbiased sample variance
  std::vector<double> half_width;  ///< 1.96·sd/√M

  double at(const std::vector<double>& field, std::size_t node, std::size_t c) const {
    return field[node * dim + c];
  }
};

/// M paths with seeds path_seed(master, p), reduced in ascending path order
/// so results do not depend on `threads` (0 = hardware concurrency).
EnsembleStats ensemble(const SdeSpec& spec, std::span<const double> x0, std::size_t paths,
                       std::uint64_t master_seed, const GridSpec& grid, Scheme scheme,
                       unsigned threads = 0);

/// Strong (pathwise) error study against a fine self-reference driven by the
/// same Brownian paths.
struct ConvergenceStudy {
  std::vector<double> dts;
  std::vector<double> errors;  ///< root-mean-square end-state error
  double slope = 0.0;          ///< least-squares slope of log error vs log dt
};

struct ConvergenceSetup {
  std::vector<double> x0;
  double t0 = 0.0;
  double horizon = 1.0;
  std::size_t paths = 200;
  std::uint64_t master_seed = 1;
  int fine_level = 14;                 ///< reference dt = horizon·2^-fine_level
  std::vector<int> levels{6, 7, 8, 9, 10};
};

/// Error of `scheme` on `spec` against `reference_scheme` on `reference` at
/// the finest level.
ConvergenceStudy strong_convergence(const SdeSpec& spec, Scheme scheme, const SdeSpec& reference,
                                    Scheme reference_scheme, const ConvergenceSetup& setup);

/// RMS end-state gap between two scheme/spec pairs run on the same coarse
/// paths at each level (e.g. Itô–Milstein against Stratonovich–Heun).
ConvergenceStudy pathwise_gap(const SdeSpec& a, Scheme scheme_a, const SdeSpec& b, Scheme scheme_b,
                              const ConvergenceSetup& setup);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace pendulab
