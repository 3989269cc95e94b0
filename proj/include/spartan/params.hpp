#pragma once

#include <string>

#include "spartan/errors.hpp"

namespace spartan {

// Model parameters of the fluctuation-gradient-curvature (FGC) random process,
// together with the sampling step of the grid the process lives on.
// alpha, xi and lags share one time unit; no conversion happens anywhere.
struct SpartanParams {
  double eta0 = 1.0;   // scale coefficient, > 0
  double eta1 = 0.0;   // shape coefficient, > -2
  double xi = 1.0;     // characteristic time, > 0
  double alpha = 1.0;  // sampling step, > 0
};

// The infinite-band covariance is positive definite iff the spectral
// denominator 1 + eta1*u^2 + u^4 stays positive, i.e. eta1 > -2.
inline bool permissible(const SpartanParams& p) noexcept {
  return p.eta0 > 0.0 && p.xi > 0.0 && p.alpha > 0.0 && p.eta1 > -2.0;
}

inline void require_permissible(const SpartanParams& p) {
  if (!permissible(p))
    throw PermissibilityError(
        "parameters outside the permissible region (need eta0 > 0, xi > 0, "
        "alpha > 0, eta1 > -2): eta0=" + std::to_string(p.eta0) +
        " eta1=" + std::to_string(p.eta1) + " xi=" + std::to_string(p.xi) +
        " alpha=" + std::to_string(p.alpha));
}

enum class CovKind { spartan, gaussian, exponential, spherical, whittle_matern };

// One covariance model out of the five supported families.
//   gaussian / exponential / spherical : sigma (std dev), b (correlation time)
//   whittle_matern                     : sigma, kappa (inverse length), nu (half-integer)
//   spartan                            : SpartanParams
struct CovarianceSpec {
  CovKind kind = CovKind::gaussian;
  double sigma = 1.0;
  double b = 1.0;
  double kappa = 1.0;
  double nu = 0.5;
  SpartanParams sp{};
};

const char* cov_kind_name(CovKind k) noexcept;
CovKind cov_kind_from_name(const std::string& name);  // throws InputError

void validate(const CovarianceSpec& spec);  // throws InputError / PermissibilityError

}  // namespace spartan
