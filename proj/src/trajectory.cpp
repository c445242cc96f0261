#include "pendulab/trajectory.hpp"

#include <stdexcept>
#include <string>

namespace pendulab {

Trajectory::Trajectory(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw std::invalid_argument("trajectory dimension must be positive");
}

void Trajectory::reserve(std::size_t nodes) {
  times_.reserve(nodes);
  data_.reserve(nodes * dim_);
}

void Trajectory::push(double t, std::span<const double> state) {
  if (state.size() != dim_) {
    throw std::invalid_argument("trajectory state has dimension " + std::to_string(state.size()) +
                                ", expected " + std::to_string(dim_));
  }
  if (!times_.empty() && !(t > times_.back())) {
    throw std::invalid_argument("trajectory times must be strictly increasing");
  }
  times_.push_back(t);
  data_.insert(data_.end(), state.begin(), state.end());
}

std::span<const double> Trajectory::state(std::size_t i) const {
  if (i >= times_.size()) throw std::out_of_range("trajectory node out of range");
  return {data_.data() + i * dim_, dim_};
}

std::vector<double> Trajectory::component(std::size_t c) const {
  if (c >= dim_) throw std::out_of_range("trajectory component out of range");
  std::vector<double> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back(data_[i * dim_ + c]);
  return out;
}

}  // namespace pendulab
