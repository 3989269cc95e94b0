#include "spartan/covariance.hpp"

#include <cmath>
#include <cstdlib>

namespace spartan {

const char* cov_kind_name(CovKind k) noexcept {
  switch (k) {
    case CovKind::spartan: return "spartan";
    case CovKind::gaussian: return "gaussian";
    case CovKind::exponential: return "exponential";
    case CovKind::spherical: return "spherical";
    case CovKind::whittle_matern: return "whittle-matern";
  }
  return "?";
}

CovKind cov_kind_from_name(const std::string& name) {
  if (name == "spartan") return CovKind::spartan;
  if (name == "gaussian") return CovKind::gaussian;
  if (name == "exponential") return CovKind::exponential;
  if (name == "spherical") return CovKind::spherical;
  if (name == "whittle-matern" || name == "matern") return CovKind::whittle_matern;
  throw InputError("unknown covariance kind '" + name + "'");
}

static bool is_half_integer(double nu) {
  double two = 2.0 * nu;
  return two > 0.0 && std::abs(two - std::round(two)) < 1e-12 &&
         std::abs(nu - std::round(nu)) > 0.25;
}

void validate(const CovarianceSpec& spec) {
  if (spec.kind == CovKind::spartan) {
    require_permissible(spec.sp);
    return;
  }
  if (!(spec.sigma >= 0.0))
    throw InputError("covariance sigma must be nonnegative");
  if (spec.kind == CovKind::whittle_matern) {
    if (!(spec.kappa > 0.0)) throw InputError("whittle-matern kappa must be positive");
    if (!is_half_integer(spec.nu))
      throw InputError("whittle-matern nu must be half-integer (0.5, 1.5, ...); got " +
                       std::to_string(spec.nu));
  } else {
    if (!(spec.b > 0.0)) throw InputError("correlation time b must be positive");
  }
}

double spartan_covariance_normalized(double h, double eta1) {
  h = std::abs(h);
  if (std::abs(eta1) < 2.0) {
    // Complex spectral poles at +-beta1 + i*beta2; |pole| = 1.
    const double beta1 = std::sqrt(std::abs(2.0 - eta1)) / 2.0;
    const double beta2 = std::sqrt(std::abs(2.0 + eta1)) / 2.0;
    const double osc = (beta1 > 0.0) ? std::sin(h * beta1) / (4.0 * beta1) : h / 4.0;
    return std::exp(-h * beta2) * (std::cos(h * beta1) / (4.0 * beta2) + osc);
  }
  if (eta1 == 2.0) return (1.0 + h) / 4.0 * std::exp(-h);
  // eta1 > 2: two real decay rates omega1 > omega2 with omega1*omega2 = 1.
  // Ordered so the bracket is positive and continuous with the eta1 = 2 branch.
  const double delta = std::sqrt(std::abs(eta1 * eta1 - 4.0));
  const double omega1 = std::sqrt((eta1 + delta) / 2.0);
  const double omega2 = std::sqrt((eta1 - delta) / 2.0);
  return (std::exp(-h * omega2) / (2.0 * omega2) - std::exp(-h * omega1) / (2.0 * omega1)) /
         delta;
}

double spartan_covariance(double tau, const SpartanParams& p) {
  require_permissible(p);
  return p.eta0 * spartan_covariance_normalized(std::abs(tau) / p.xi, p.eta1);
}

double spartan_spectral_density(double k, const SpartanParams& p) {
  require_permissible(p);
  const double u2 = (k * p.xi) * (k * p.xi);
  return p.eta0 * p.xi / (1.0 + p.eta1 * u2 + u2 * u2);
}

// Half-integer Whittle-Matern, nu = m + 1/2:
//   C(x)/sigma^2 = 2^m m!/(2m)! * x^m e^{-x} * sum_{k=0}^m (m+k)!/(k!(m-k)!) (2x)^{-k}
// which reduces to the familiar exp(-x) * polynomial forms.
static double matern_half_integer(double x, int m) {
  if (x == 0.0) return 1.0;
  double pref = 1.0;  // 2^m m!/(2m)!
  for (int i = 1; i <= m; ++i) pref *= 2.0 * i / ((2.0 * i) * (2.0 * i - 1.0));
  double sum = 0.0;
  double coef = 1.0;  // (m+k)!/(k!(m-k)!) built incrementally
  double inv = 1.0;   // (2x)^{-k}
  for (int k = 0; k <= m; ++k) {
    if (k > 0) {
      coef *= static_cast<double>((m + k) * (m - k + 1)) / k;
      inv /= 2.0 * x;
    }
    sum += coef * inv;
  }
  return pref * std::pow(x, m) * std::exp(-x) * sum;
}

double classical_covariance(double tau, const CovarianceSpec& spec) {
  validate(spec);
  const double var = spec.sigma * spec.sigma;
  switch (spec.kind) {
    case CovKind::spartan:
      return spartan_covariance(tau, spec.sp);
    case CovKind::gaussian: {
      const double h = std::abs(tau) / spec.b;
      return var * std::exp(-h * h);
    }
    case CovKind::exponential:
      return var * std::exp(-std::abs(tau) / spec.b);
    case CovKind::spherical: {
      const double h = std::abs(tau) / spec.b;
      if (h > 1.0) return 0.0;
      return var * (1.0 - 1.5 * h + 0.5 * h * h * h);
    }
    case CovKind::whittle_matern: {
      const int m = static_cast<int>(std::lround(spec.nu - 0.5));
      return var * matern_half_integer(spec.kappa * std::abs(tau), m);
    }
  }
  std::abort();
}

}  // namespace spartan
