#pragma once

#include <functional>
#include <span>
#include <vector>

namespace spartan {

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
};

// Derivative-free simplex search with the standard reflection / expansion /
// contraction / shrink moves. Terminates when both the simplex diameter and
// the objective spread fall below tol (checked against the best vertex);
// throws ConvergenceError carrying the best vertex after max_iter cycles,
// and NumericalError on a NaN objective value. +infinity values are legal
// and simply rank worst.
NelderMeadResult nelder_mead(
    const std::function<double(std::span<const double>)>& f,
    std::span<const double> x0, double tol, int max_iter);

}  // namespace spartan
