#include "spartan/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "spartan/errors.hpp"

namespace spartan {

namespace {

double checked_eval(const std::function<double(std::span<const double>)>& f,
                    std::span<const double> x) {
  const double v = f(x);
  if (std::isnan(v)) {
    std::string where = "NaN objective at (";
    for (std::size_t i = 0; i < x.size(); ++i)
      where += (i ? ", " : "") + std::to_string(x[i]);
    throw NumericalError(where + ")");
  }
  return v;
}

}  // namespace

NelderMeadResult nelder_mead(
    const std::function<double(std::span<const double>)>& f,
    std::span<const double> x0, double tol, int max_iter) {
  const std::size_t n = x0.size();
  if (n == 0) throw InputError("empty start point");

  std::vector<std::vector<double>> v(n + 1, std::vector<double>(x0.begin(), x0.end()));
  for (std::size_t i = 0; i < n; ++i)
    v[i + 1][i] = x0[i] != 0.0 ? 1.05 * x0[i] : 0.00025;

  std::vector<double> fv(n + 1);
  for (std::size_t i = 0; i <= n; ++i) fv[i] = checked_eval(f, v[i]);
  if (!std::isfinite(fv[0]))
    throw NumericalError("objective not finite at the start point");

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), xr(n), xe(n), xc(n);
  int iter = 0;

  auto sort_vertices = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
  };

  for (;;) {
    sort_vertices();
    const std::size_t best = order[0], worst = order[n];

    double fspread = 0.0, xspread = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
      fspread = std::max(fspread, std::abs(fv[order[i]] - fv[best]));
      for (std::size_t j = 0; j < n; ++j)
        xspread = std::max(xspread, std::abs(v[order[i]][j] - v[best][j]));
    }
    if (fspread <= tol && xspread <= tol)
      return {v[best], fv[best], iter};
    if (iter >= max_iter)
      throw ConvergenceError("no convergence within " +
                                 std::to_string(max_iter) + " iterations",
                             v[best], fv[best], iter);
    ++iter;

    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i <= n; ++i)
        if (i != worst) s += v[i][j];
      centroid[j] = s / static_cast<double>(n);
    }

    for (std::size_t j = 0; j < n; ++j) xr[j] = 2.0 * centroid[j] - v[worst][j];
    const double fr = checked_eval(f, xr);

    if (fr < fv[best]) {
      for (std::size_t j = 0; j < n; ++j) xe[j] = 3.0 * centroid[j] - 2.0 * v[worst][j];
      const double fe = checked_eval(f, xe);
      if (fe < fr) {
        v[worst] = xe;
        fv[worst] = fe;
      } else {
        v[worst] = xr;
        fv[worst] = fr;
      }
      continue;
    }
    if (fr < fv[order[n - 1]]) {
      v[worst] = xr;
      fv[worst] = fr;
      continue;
    }
    if (fr < fv[worst]) {  // outside contraction
      for (std::size_t j = 0; j < n; ++j)
        xc[j] = 1.5 * centroid[j] - 0.5 * v[worst][j];
      const double fc = checked_eval(f, xc);
      if (fc <= fr) {
        v[worst] = xc;
        fv[worst] = fc;
        continue;
      }
    } else {  // inside contraction
      for (std::size_t j = 0; j < n; ++j)
        xc[j] = 0.5 * centroid[j] + 0.5 * v[worst][j];
      const double fc = checked_eval(f, xc);
      if (fc < fv[worst]) {
        v[worst] = xc;
        fv[worst] = fc;
        continue;
      }
    }
    // shrink toward the best vertex
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (std::size_t j = 0; j < n; ++j)
        v[i][j] = 0.5 * (v[i][j] + v[best][j]);
      fv[i] = checked_eval(f, v[i]);
    }
  }
}

}  // namespace spartan
