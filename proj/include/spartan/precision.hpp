#pragma once

#include <cstddef>
#include <span>

#include "spartan/banded.hpp"
#include "spartan/params.hpp"

namespace spartan {

// Precision matrix (inverse covariance) of the discretized model on a regular
// grid of n >= 3 points with spacing p.alpha, in pentadiagonal band form:
//   J = (1/(eta0*xi)) * [ I + eta1*(xi/alpha)^2 * D1'D1 + (xi/alpha)^4 * D2'D2 ]
// with D1, D2 the first- and second-difference operators.
PentaBands build_precision(std::size_t n, const SpartanParams& p);

// Same, with eta0 fixed to 1 (J' = eta0 * J). The likelihood and the gap
// filler work with this normalized form so eta0 can be profiled out.
PentaBands build_precision_unit_eta0(std::size_t n, const SpartanParams& p);

// Raw quadratic sums over a complete series: sum of squared values, squared
// first differences and squared second differences (no grid-step scaling).
struct StencilSums {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0;
};

StencilSums stencil_sums(std::span<const double> x);         // chunked, OpenMP
StencilSums stencil_sums_serial(std::span<const double> x);  // plain-loop reference

// Energy 1/2 x' J x of a complete series under parameters p.
double energy(const StencilSums& s, const SpartanParams& p);
double energy(std::span<const double> x, const SpartanParams& p);

}  // namespace spartan
