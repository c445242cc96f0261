#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pendulab {

/// Time grid plus equal-dimension states, stored row-major.
///
/// Times are strictly increasing; `push` rejects anything else.
class Trajectory {
 public:
  explicit Trajectory(std::size_t dim);

  void reserve(std::size_t nodes);
  void push(double t, std::span<const double> state);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return times_.size(); }
  bool empty() const noexcept { return times_.empty(); }

  double time(std::size_t i) const { return times_.at(i); }
  std::span<const double> state(std::size_t i) const;
  std::span<const double> back() const { return state(size() - 1); }

  const std::vector<double>& times() const noexcept { return times_; }
  const std::vector<double>& data() const noexcept { return data_; }

  /// Component `c` at every node.
  std::vector<double> component(std::size_t c) const;

 private:
  std::size_t dim_;
  std::vector<double> times_;
  std::vector<double> data_;
};

}  // namespace pendulab
