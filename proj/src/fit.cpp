#include "spartan/fit.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "spartan/errors.hpp"
#include "spartan/moments.hpp"
#include "spartan/nelder_mead.hpp"
#include "spartan/precision.hpp"

namespace spartan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// Search coordinates u = (log(eta1 + 2), log xi) keep the simplex inside the
// permissible region; estimates often crowd the eta1 = -2 boundary.
inline double u_eta1(double u0) { return std::exp(u0) - 2.0; }
inline double u_xi(double u1) { return std::exp(u1); }

}  // namespace

const char* fit_method_name(FitMethod m) noexcept {
  return m == FitMethod::mmom ? "mmom" : "mle";
}

FitMethod fit_method_from_name(const std::string& name) {
  if (name == "mmom") return FitMethod::mmom;
  if (name == "mle") return FitMethod::mle;
  throw InputError("unknown fit method '" + name + "' (expected mmom or mle)");
}

double log_det_banded(const PentaBands& a) { return PentaLdlt(a).log_det(); }

FitResult fit_mmom(const GappySeries& x) {
  const auto t0 = std::chrono::steady_clock::now();
  validate(x);
  const MomentSummary m = sample_moments(x);
  if (m.n1 == 0 || m.n2 == 0 || !(m.s0 > 0.0) || !(m.s1 > 0.0) ||
      !(m.s2 > 0.0))
    throw DegenerateInputError(
        "method-of-moments fit needs positive sample moments (counts: " +
        std::to_string(m.n0) + " points, " + std::to_string(m.n1) +
        " pairs, " + std::to_string(m.n2) + " triples)");

  const auto f = [&](std::span<const double> u) {
    const double eta1 = u_eta1(u[0]), xi = u_xi(u[1]);
    if (!std::isfinite(eta1) || !std::isfinite(xi) || !(xi > 0.0)) return kInf;
    return dm_objective(eta1, xi, m, x.alpha);
  };
  const std::array<double, 2> start = {std::log(-1.0 + 2.0),
                                       std::log(x.alpha)};
  const NelderMeadResult r = nelder_mead(f, start, kFitTol, kFitMaxIter);

  FitResult out;
  out.params.eta1 = u_eta1(r.x[0]);
  out.params.xi = u_xi(r.x[1]);
  out.params.alpha = x.alpha;
  out.params.eta0 =
      m.s0 / expected_moments(out.params.eta1, out.params.xi, x.alpha).e0;
  out.objective = r.value;
  out.iterations = r.iterations;
  out.method = FitMethod::mmom;
  out.elapsed_seconds = seconds_since(t0);
  return out;
}

namespace {

// Data-dependent pieces of the likelihood, computed once per fit.
struct NllData {
  std::size_t n = 0;       // grid length (determinant dimension)
  double npts = 0.0;       // N entering the energy term
  double q0 = 0, q1 = 0, q2 = 0;  // coefficients of [1, eta1 (xi/a)^2, (xi/a)^4]
  double alpha = 1.0;
};

NllData nll_data(const GappySeries& x, bool complete) {
  NllData d;
  d.n = x.values.size();
  d.alpha = x.alpha;
  if (complete) {
    if (n_present(x) != d.n)
      throw InputError("exact likelihood requested on a series with gaps");
    const StencilSums s = stencil_sums(x.values);
    d.npts = static_cast<double>(d.n);
    d.q0 = s.s0;
    d.q1 = s.s1;
    d.q2 = s.s2;
  } else {
    const MomentSummary m = sample_moments(x);
    if (m.n1 == 0 || m.n2 == 0)
      throw InsufficientDataError(
          "likelihood needs at least one present pair and one present triple");
    d.npts = static_cast<double>(m.n0);
    // s1, s2 already carry the 1/alpha^2, 1/alpha^4 scaling; undo it here so
    // all paths share the raw-coefficient form below.
    const double a2 = x.alpha * x.alpha;
    d.q0 = d.npts * m.s0;
    d.q1 = d.npts * m.s1 * a2;
    d.q2 = d.npts * m.s2 * a2 * a2;
  }
  return d;
}

// (N/2) log(2H'/N) - (1/2) log|J'| for the precomputed data terms; H' is the
// eta0-free energy. Throws like the public nll.
double nll_value(const NllData& d, double eta1, double xi) {
  const SpartanParams p{1.0, eta1, xi, d.alpha};
  require_permissible(p);
  const double r = xi / d.alpha;
  const double hprime =
      (d.q0 + eta1 * r * r * d.q1 + r * r * r * r * d.q2) / (2.0 * xi);
  if (!(hprime > 0.0) || !std::isfinite(hprime))
    throw DegenerateInputError("nonpositive energy estimate at eta1=" +
                               std::to_string(eta1) + " xi=" +
                               std::to_string(xi));
  // For shape coefficients below about -sqrt(2) the free-boundary grid
  // precision matrix carries exactly two edge-localized negative modes while
  // staying invertible; likelihood estimates routinely land there. The
  // likelihood is continued across that region with log|det| (the inertia is
  // grid-size independent), which is also what determinant approximations
  // blind to eigenvalue signs compute.
  const PentaLdlt fac(build_precision_unit_eta0(d.n, p),
                      PentaLdlt::allow_indefinite);
  return 0.5 * d.npts * std::log(2.0 * hprime / d.npts) -
         0.5 * fac.log_abs_det();
}

double profiled_eta0(const NllData& d, double eta1, double xi) {
  const double r = xi / d.alpha;
  const double hprime =
      (d.q0 + eta1 * r * r * d.q1 + r * r * r * r * d.q2) / (2.0 * xi);
  return 2.0 * hprime / d.npts;
}

}  // namespace

double nll(double eta1, double xi, const GappySeries& x, bool complete) {
  validate(x);
  return nll_value(nll_data(x, complete), eta1, xi);
}

FitResult fit_mle(const GappySeries& x) {
  const auto t0 = std::chrono::steady_clock::now();
  validate(x);
  const bool complete = n_present(x) == x.values.size();
  const NllData d = nll_data(x, complete);

  const auto f = [&](std::span<const double> u) -> double {
    const double eta1 = u_eta1(u[0]), xi = u_xi(u[1]);
    if (!std::isfinite(eta1) || !std::isfinite(xi) || !(xi > 0.0)) return kInf;
    try {
      const double v = nll_value(d, eta1, xi);
      return std::isnan(v) ? kInf : v;
    } catch (const NumericalError&) {
      return kInf;
    }
  };

  static constexpr std::array<double, 4> kStarts = {-1.7, -1.0, 5.0, 50.0};
  std::optional<NelderMeadResult> best;
  int total_iters = 0;
  for (double e10 : kStarts) {
    const std::array<double, 2> u0 = {std::log(e10 + 2.0), std::log(x.alpha)};
    try {
      NelderMeadResult r = nelder_mead(f, u0, kFitTol, kFitMaxIter);
      total_iters += r.iterations;
      if (!best || r.value < best->value) best = std::move(r);
    } catch (const ConvergenceError& c) {
      total_iters += c.iterations();
    }
  }
  if (!best)
    throw ConvergenceError("no likelihood start converged within " +
                               std::to_string(kFitMaxIter) + " iterations",
                           {}, kInf, total_iters);

  FitResult out;
  out.params.eta1 = u_eta1(best->x[0]);
  out.params.xi = u_xi(best->x[1]);
  out.params.alpha = x.alpha;
  out.params.eta0 = profiled_eta0(d, out.params.eta1, out.params.xi);
  out.objective = best->value;
  out.iterations = total_iters;
  out.method = FitMethod::mle;
  out.elapsed_seconds = seconds_since(t0);
  return out;
}

}  // namespace spartan
