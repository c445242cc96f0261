#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "pendulab/ode.hpp"
#include "pendulab/trajectory.hpp"

namespace pendulab {

/// Caputo order α ∈ (0, 1]; α = 1 is the classical derivative.
class FractionalOrder {
 public:
  explicit FractionalOrder(double alpha);
  double value() const noexcept { return alpha_; }

 private:
  double alpha_;
};

enum class FractionalModel {
  EulerTopFracZ,  ///< orders (1, 1, α): D^α x3 = x1x2
  EulerTopFracX,  ///< orders (α, 1, 1): D^α x1 = x2x3
  PendulumFracH,  ///< D^(α+1) θ + 2H sin θ = 0
  PendulumFracK,  ///< D^(α+1) θ + 2K sin θ = 0
};

std::string_view to_string(FractionalModel m);

struct MixedOrderSystem {
  FractionalModel model = FractionalModel::EulerTopFracZ;
  FractionalOrder alpha{1.0};
  double level = 0.0;  ///< H or K; pendulum models only

  bool is_pendulum() const;
  /// Caputo order of each integrated component (pendula: one component of order α+1).
  std::vector<double> orders() const;
  void validate() const;
};

/// Product-rectangle predictor and product-trapezoid corrector weights for
/// the step that produces y_n on a uniform grid of spacing dt.
///
/// predictor[j], j = 0..n−1:  dt^α/Γ(α+1) · ((n−j)^α − (n−1−j)^α)
/// corrector[j], j = 0..n:    dt^α/Γ(α+2) · a_j with
///   a_0 = (n−1)^(α+1) − (n−1−α)·n^α,
///   a_j = (n−j+1)^(α+1) − 2(n−j)^(α+1) + (n−j−1)^(α+1),
///   a_n = 1.
struct AbmWeights {
  std::vector<double> predictor;
  std::vector<double> corrector;
};

AbmWeights abm_weights(double alpha, std::size_t n, double dt);

/// Adams–Bashforth–Moulton (PECE, full memory) on a uniform grid.
///
/// Euler top models take x0 = (x1, x2, x3). Pendulum models take
/// x0 = (θ0) or (θ0, θ'0), with θ'0 = 0 when omitted; they return (θ, θ')
/// where θ' is the order-α integral of the forcing history plus θ'0.
/// The grid step must divide t1 − t0.
Trajectory integrate_fractional(const MixedOrderSystem& sys, std::span<const double> x0,
                                const GridSpec& grid);

}  // namespace pendulab
