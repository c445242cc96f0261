#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace pendulab {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A time-stepper produced a non-finite value.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double time)
      : std::runtime_error(what + " (t = " + std::to_string(time) + ")"), time_(time) {}

  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// Invalid run configuration; `field()` names the offending setting.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Input trajectory violates a constraint the operation requires.
class ConstraintViolation : public std::runtime_error {
 public:
  ConstraintViolation(const std::string& what, std::size_t node, double deviation)
      : std::runtime_error(what + " (worst node " + std::to_string(node) +
                           ", deviation " + std::to_string(deviation) + ")"),
        node_(node),
        deviation_(deviation) {}

  std::size_t node() const noexcept { return node_; }
  double deviation() const noexcept { return deviation_; }

 private:
  std::size_t node_;
  double deviation_;
};

}  // namespace pendulab
