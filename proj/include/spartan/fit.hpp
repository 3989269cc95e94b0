#pragma once

#include <string>

#include "spartan/banded.hpp"
#include "spartan/params.hpp"
#include "spartan/series.hpp"

namespace spartan {

enum class FitMethod { mmom, mle };
const char* fit_method_name(FitMethod m) noexcept;
FitMethod fit_method_from_name(const std::string& name);  // throws InputError

struct FitResult {
  SpartanParams params;
  double objective = 0.0;  // final moment-distance or profile NLL value
  int iterations = 0;      // simplex cycles, summed over restarts for MLE
  double elapsed_seconds = 0.0;
  FitMethod method = FitMethod::mmom;
};

// Simplex tolerance (parameters and objective) and iteration cap shared by
// both fitters.
inline constexpr double kFitTol = 1e-6;
inline constexpr int kFitMaxIter = 2000;

// Modified method of moments: minimize the moment-ratio distance over
// (eta1, xi) in log coordinates from the start (eta1 = -1, xi = alpha),
// then recover eta0 = s0 / e0 at the minimizer.
FitResult fit_mmom(const GappySeries& x);

// Profile negative log-likelihood with eta0 eliminated and constants dropped:
//   (N/2) log(2H'/N) - (1/2) log|J'|.
// `complete` selects the exact quadratic-form energy (gap-free series only);
// otherwise H' is approximated from the sample moments with N = #present
// while the determinant keeps the full grid.
double nll(double eta1, double xi, const GappySeries& x, bool complete);

// Maximum likelihood with a multistart over eta1 in {-1.7, -1, 5, 50},
// xi starting at alpha; returns the deepest minimum with eta0 profiled out.
FitResult fit_mle(const GappySeries& x);

// Exact log-determinant via the banded factorization, linear cost.
double log_det_banded(const PentaBands& a);

}  // namespace spartan
