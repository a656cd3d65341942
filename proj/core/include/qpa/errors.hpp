#pragma once

#include <stdexcept>
#include <string>

namespace qpa {

/// Error categories. The numeric values double as CLI exit codes.
enum class ErrorCategory : int {
  validation = 2,
  capacity = 3,
  convergence = 4,
  domain = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }
  int exit_code() const noexcept { return static_cast<int>(category_); }

 private:
  ErrorCategory category_;
};

/// Malformed input: wrong shape, non-Hermitian, out-of-range operand, bad schema.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what)
      : Error(ErrorCategory::validation, what) {}
};

/// A problem instance exceeds an explicit-size limit.
class CapacityError : public Error {
 public:
  explicit CapacityError(const std::string& what)
      : Error(ErrorCategory::capacity, what) {}
};

/// Mathematical precondition violated (support mismatch, rate outside a window).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what)
      : Error(ErrorCategory::domain, what) {}
};

/// An iterative solver stopped without meeting its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_value, double residual)
      : Error(ErrorCategory::convergence, what),
        best_value_(best_value),
        residual_(residual) {}

  double best_value() const noexcept { return best_value_; }
  double residual() const noexcept { return residual_; }

 private:
  double best_value_;
  double residual_;
};

}  // namespace qpa
