#pragma once

#include <cstddef>

#include "spartan/series.hpp"

namespace spartan {

// Sample averages of the squared value (s0), squared step-scaled forward
// difference (s1) and squared step-scaled centered second difference (s2),
// each taken over the stencils whose points are all present. n0..n2 are the
// stencil counts; an average with count 0 is reported as 0 and is undefined.
struct MomentSummary {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0;
  std::size_t n0 = 0, n1 = 0, n2 = 0;
};

MomentSummary sample_moments(const GappySeries& x);         // chunked, OpenMP
MomentSummary sample_moments_serial(const GappySeries& x);  // plain-loop reference

// Model expectations of the three moments at eta0 = 1:
//   e0 = G(0),  e1 = 2[G(0) - G(a)] / a^2,  e2 = 2[3G(0) + G(2a) - 4G(a)] / a^4
// with G the closed-form covariance and a the grid step.
struct ExpectedMoments {
  double e0 = 0.0, e1 = 0.0, e2 = 0.0;
};
ExpectedMoments expected_moments(double eta1, double xi, double alpha);

// Moment-ratio distance
//   |1 - sqrt((s1/s0)(e0/e1))|^2 + |1 - sqrt((s2/s1)(e1/e2))|^2.
// eta0 cancels from both ratios. Returns +infinity when the expected moments
// lose all significance to cancellation near the permissibility boundary.
// Throws DegenerateInputError when the sample moments are unusable.
double dm_objective(double eta1, double xi, const MomentSummary& m, double alpha);

}  // namespace spartan
