#pragma once

#include <stdexcept>
#include <string>

namespace pipct {

/// Precondition or argument range violated.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The target function produced a non-finite value.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& what, double location)
      : std::runtime_error(what), location_(location) {}

  /// Abscissa (domain units) where evaluation failed.
  double location() const noexcept { return location_; }

 private:
  double location_;
};

/// Denominator vanished at the evaluation point.
class PoleError : public std::runtime_error {
 public:
  PoleError(const std::string& what, double location)
      : std::runtime_error(what), location_(location) {}

  double location() const noexcept { return location_; }

 private:
  double location_;
};

}  // namespace pipct
