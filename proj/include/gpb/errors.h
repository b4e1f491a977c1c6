#pragma once

#include <stdexcept>
#include <string>

namespace gpb {

// Parameter outside the mathematical domain of an operation.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Parameters are valid for the process but the requested construction
// is not available there (e.g. a decomposition whose component diverges).
class UnsupportedRegion : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double partial_value, double error_estimate)
      : std::runtime_error(what), partial_value_(partial_value), error_estimate_(error_estimate) {}

  double partial_value() const noexcept { return partial_value_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double partial_value_;
  double error_estimate_;
};

class FactorizationError : public std::runtime_error {
 public:
  FactorizationError(const std::string& what, double smallest_eigenvalue)
      : std::runtime_error(what), smallest_eigenvalue_(smallest_eigenvalue) {}

  double smallest_eigenvalue() const noexcept { return smallest_eigenvalue_; }

 private:
  double smallest_eigenvalue_;
};

}  // namespace gpb
