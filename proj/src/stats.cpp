#include "spartan/stats.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include "spartan/errors.hpp"
#include "spartan/fit.hpp"
#include "spartan/moments.hpp"
#include "spartan/params.hpp"

namespace spartan {

namespace {

struct MetricAccum {
  double abs_sum = 0.0;
  double rel_sum = 0.0;
  double abs_rel_sum = 0.0;
  double sq_sum = 0.0;
  std::size_t count = 0;
  std::size_t excluded = 0;

  void add(double predicted, double actual) {
    const double e = predicted - actual;
    abs_sum += std::abs(e);
    sq_sum += e * e;
    ++count;
    if (actual == 0.0) {
      ++excluded;
    } else {
      rel_sum += e / actual;
      abs_rel_sum += std::abs(e / actual);
    }
  }

  MetricSet finalize() const {
    MetricSet m;
    m.count = count;
    m.excluded_relative = excluded;
    if (count == 0) {
      m.mae = m.mre = m.mare = m.rmse =
          std::numeric_limits<double>::quiet_NaN();
      return m;
    }
    const double dn = static_cast<double>(count);
    m.mae = abs_sum / dn;
    m.rmse = std::sqrt(sq_sum / dn);
    const std::size_t rel = count - excluded;
    if (rel == 0) {
      m.mre = std::numeric_limits<double>::quiet_NaN();
      m.mare = std::numeric_limits<double>::quiet_NaN();
    } else {
      m.mre = rel_sum / static_cast<double>(rel);
      m.mare = abs_rel_sum / static_cast<double>(rel);
    }
    return m;
  }
};

std::vector<double> linspace(double lo, double hi, std::size_t steps) {
  if (steps == 0) {
    throw InputError("surface_grid: axis needs at least one step");
  }
  std::vector<double> axis(steps);
  if (steps == 1) {
    axis[0] = lo;
    return axis;
  }
  const double d = (hi - lo) / static_cast<double>(steps - 1);
  for (std::size_t i = 0; i < steps; ++i) {
    axis[i] = lo + static_cast<double>(i) * d;
  }
  return axis;
}

}  // namespace

ErrorReport error_stats(std::span<const double> predicted,
                        std::span<const double> actual,
                        std::span<const std::pair<int, int>> categories) {
  const std::size_t n = predicted.size();
  if (n == 0) {
    throw InputError("error_stats: need at least one point");
  }
  if (actual.size() != n || categories.size() != n) {
    throw InputError("error_stats: input length mismatch");
  }

  MetricAccum cat[3][3];
  MetricAccum total;
  double sp = 0.0, sa = 0.0, spp = 0.0, saa = 0.0, spa = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const auto [i, j] = categories[t];
    if (i < 0 || i > 2 || j < 0 || j > 2) {
      throw InputError("error_stats: category (" + std::to_string(i) + "," +
                       std::to_string(j) + ") outside 0..2 at point " +
                       std::to_string(t));
    }
    cat[i][j].add(predicted[t], actual[t]);
    total.add(predicted[t], actual[t]);
    sp += predicted[t];
    sa += actual[t];
    spp += predicted[t] * predicted[t];
    saa += actual[t] * actual[t];
    spa += predicted[t] * actual[t];
  }

  ErrorReport rep;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      rep.by_category[static_cast<std::size_t>(i)][static_cast<std::size_t>(
          j)] = cat[i][j].finalize();
    }
  }
  rep.total = total.finalize();

  const double dn = static_cast<double>(n);
  const double cov = spa - sp * sa / dn;
  const double vp = spp - sp * sp / dn;
  const double va = saa - sa * sa / dn;
  rep.r = (vp > 0.0 && va > 0.0)
              ? cov / std::sqrt(vp * va)
              : std::numeric_limits<double>::quiet_NaN();
  return rep;
}

AcfResult empirical_acf(const GappySeries& x, std::size_t max_lag) {
  validate(x);
  const std::size_t n = x.values.size();
  const std::size_t m = n_present(x);
  if (m < 2) {
    throw InsufficientDataError("empirical_acf: need at least 2 points");
  }

  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (x.present[i]) mean += x.values[i];
  }
  mean /= static_cast<double>(m);
  double var = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (x.present[i]) {
      const double d = x.values[i] - mean;
      var += d * d;
    }
  }
  var /= static_cast<double>(m);  // biased normalization
  if (!(var > 0.0)) {
    throw DegenerateInputError("empirical_acf: sample variance is zero");
  }

  AcfResult out;
  out.rho.assign(max_lag + 1, std::numeric_limits<double>::quiet_NaN());
  out.pairs.assign(max_lag + 1, 0);
  const long long lags = static_cast<long long>(max_lag) + 1;
#pragma omp parallel for schedule(static)
  for (long long k = 0; k < lags; ++k) {
    const std::size_t lag = static_cast<std::size_t>(k);
    if (lag >= n) continue;
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t t = 0; t + lag < n; ++t) {
      if (x.present[t] && x.present[t + lag]) {
        sum += (x.values[t] - mean) * (x.values[t + lag] - mean);
        ++count;
      }
    }
    out.pairs[lag] = count;
    if (count > 0) {
      out.rho[lag] = (sum / static_cast<double>(count)) / var;
    }
  }
  return out;
}

SurfaceGrid surface_grid(const GappySeries& x, ObjectiveKind kind,
                         const SurfaceRanges& ranges) {
  validate(x);
  SurfaceGrid grid;
  grid.kind = kind;
  grid.eta1_axis = linspace(ranges.eta1_min, ranges.eta1_max,
                            ranges.eta1_steps);
  grid.xi_axis = linspace(ranges.xi_min, ranges.xi_max, ranges.xi_steps);
  const std::size_t rows = grid.eta1_axis.size();
  const std::size_t cols = grid.xi_axis.size();
  grid.values.assign(rows * cols,
                     std::numeric_limits<double>::quiet_NaN());

  const bool complete = n_present(x) == x.values.size();
  MomentSummary moments;
  // One probe evaluation outside the loop, so data-wide problems (degenerate
  // moments, too few stencils) surface as errors instead of an all-NaN grid.
  if (kind == ObjectiveKind::dm) {
    moments = sample_moments(x);
    (void)dm_objective(0.0, x.alpha, moments, x.alpha);
  } else {
    (void)nll(0.0, x.alpha, x, complete);
  }

  // Cells are independent and each writes only its own slot, so the result
  // does not depend on the execution order.
  const long long cells = static_cast<long long>(rows * cols);
#pragma omp parallel for schedule(static)
  for (long long c = 0; c < cells; ++c) {
    const std::size_t i = static_cast<std::size_t>(c) / cols;
    const std::size_t j = static_cast<std::size_t>(c) % cols;
    const double eta1 = grid.eta1_axis[i];
    const double xi = grid.xi_axis[j];
    if (!(eta1 > -2.0) || !(xi > 0.0)) continue;  // non-permissible cell
    try {
      if (kind == ObjectiveKind::dm) {
        grid.values[static_cast<std::size_t>(c)] =
            dm_objective(eta1, xi, moments, x.alpha);
      } else {
        grid.values[static_cast<std::size_t>(c)] = nll(eta1, xi, x, complete);
      }
    } catch (const NumericalError&) {
      // leave the cell NaN
    }
  }

  try {
    const FitResult fit = kind == ObjectiveKind::dm ? fit_mmom(x) : fit_mle(x);
    grid.has_optimum = true;
    grid.opt_eta1 = fit.params.eta1;
    grid.opt_xi = fit.params.xi;
  } catch (const NumericalError&) {
    grid.has_optimum = false;
  }
  return grid;
}

}  // namespace spartan
