#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace spartan {

// Input-side failures (bad files, bad arguments). CLI maps these to exit code 2.
class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ParseError : public InputError {
public:
  ParseError(const std::string& what, std::size_t line)
      : InputError(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

// Numerical failures. CLI maps these to exit code 3.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Parameters outside the permissible region (eta0 <= 0, xi <= 0, eta1 <= -2),
// or a finite precision matrix that turned out indefinite at runtime.
class PermissibilityError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class NotPositiveDefiniteError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class DegenerateInputError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class InsufficientDataError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

// Covariance matrix too ill-conditioned to solve against.
class ConditioningError : public NumericalError {
public:
  ConditioningError(const std::string& what, double rcond_estimate)
      : NumericalError(what), rcond_(rcond_estimate) {}
  double rcond_estimate() const noexcept { return rcond_; }

private:
  double rcond_;
};

// Optimizer ran out of iterations. Carries the best point seen so far.
class ConvergenceError : public NumericalError {
public:
  ConvergenceError(const std::string& what, std::vector<double> best_point,
                   double best_value, int iterations)
      : NumericalError(what),
        best_point_(std::move(best_point)),
        best_value_(best_value),
        iterations_(iterations) {}

  const std::vector<double>& best_point() const noexcept { return best_point_; }
  double best_value() const noexcept { return best_value_; }
  int iterations() const noexcept { return iterations_; }

private:
  std::vector<double> best_point_;
  double best_value_;
  int iterations_;
};

}  // namespace spartan
