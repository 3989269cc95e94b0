#pragma once

#include "spartan/params.hpp"

namespace spartan {

// Closed-form covariance of the infinite-band FGC process at lag tau.
// Three branches depending on eta1 (oscillatory, critical, overdamped);
// continuous across the branch boundaries.
double spartan_covariance(double tau, const SpartanParams& p);

// Same with eta0 = 1 and tau expressed as h = |tau|/xi. The fitters work in
// this normalized form because eta0 cancels from every moment ratio.
double spartan_covariance_normalized(double h, double eta1);

// Spectral density eta0*xi / (1 + eta1*(k*xi)^2 + (k*xi)^4), infinite band.
double spartan_spectral_density(double k, const SpartanParams& p);

// Dispatch over the five covariance families. h = |tau|/b for the classical
// models; spartan forwards to spartan_covariance. Whittle-Matern accepts
// half-integer nu only (closed forms); anything else is rejected.
double classical_covariance(double tau, const CovarianceSpec& spec);

}  // namespace spartan
