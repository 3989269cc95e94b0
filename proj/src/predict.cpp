#include "spartan/predict.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <string>

#include "spartan/banded.hpp"
#include "spartan/covariance.hpp"
#include "spartan/errors.hpp"
#include "spartan/precision.hpp"

namespace spartan {

namespace {

// Relative reciprocal-condition floor below which the kriging system is
// reported as unusable rather than silently solved.
constexpr double kRcondFloor = 1e-14;

// 1-norm estimate of ||A^{-1}|| from an existing Cholesky factorization
// (Hager/Higham iteration; a handful of solves, no refactorization).
double inverse_norm1_estimate(const Eigen::LLT<Eigen::MatrixXd>& llt,
                              Eigen::Index m) {
  Eigen::VectorXd v =
      llt.solve(Eigen::VectorXd::Constant(m, 1.0 / static_cast<double>(m)));
  double est = v.lpNorm<1>();
  for (int iter = 0; iter < 5; ++iter) {
    Eigen::VectorXd s(m);
    for (Eigen::Index i = 0; i < m; ++i) s[i] = v[i] < 0.0 ? -1.0 : 1.0;
    const Eigen::VectorXd u = llt.solve(s);  // A symmetric: A^{-T} = A^{-1}
    Eigen::Index j = 0;
    const double umax = u.cwiseAbs().maxCoeff(&j);
    if (umax <= u.dot(s) / static_cast<double>(m)) break;
    v = llt.solve(Eigen::VectorXd::Unit(m, j));
    const double next = v.lpNorm<1>();
    if (next <= est) break;
    est = next;
  }
  return est;
}

std::vector<std::size_t> present_positions(const GappySeries& x) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < x.values.size(); ++i) {
    if (x.present[i]) idx.push_back(i);
  }
  return idx;
}

std::function<double(std::size_t, std::size_t)> covariance_on_grid(
    const CovarianceSpec& cov, double alpha) {
  return [cov, alpha](std::size_t i, std::size_t j) {
    const double lag =
        (i >= j ? static_cast<double>(i - j) : static_cast<double>(j - i)) *
        alpha;
    return classical_covariance(lag, cov);
  };
}

}  // namespace

PredictionSet make_prediction_set(const GappySeries& x) {
  validate(x);
  PredictionSet set;
  const std::size_t n = x.values.size();
  for (std::size_t z = 0; z < n; ++z) {
    if (x.present[z]) continue;
    set.indices.push_back(z);
    std::vector<std::size_t> nb;
    for (int off = -2; off <= 2; ++off) {
      if (off == 0) continue;
      const long long s = static_cast<long long>(z) + off;
      if (s < 0 || s >= static_cast<long long>(n)) continue;
      if (x.present[static_cast<std::size_t>(s)]) {
        nb.push_back(static_cast<std::size_t>(s));
      }
    }
    set.neighborhoods.push_back(std::move(nb));
  }
  return set;
}

std::pair<int, int> classify_category(std::size_t z,
                                      const std::vector<char>& present) {
  if (z >= present.size()) {
    throw InputError("classify_category: position " + std::to_string(z) +
                     " outside grid of length " +
                     std::to_string(present.size()));
  }
  int near = 0;
  int next = 0;
  const long long n = static_cast<long long>(present.size());
  const long long zz = static_cast<long long>(z);
  for (int off : {-1, 1}) {
    const long long s = zz + off;
    if (s >= 0 && s < n && present[static_cast<std::size_t>(s)]) ++near;
  }
  for (int off : {-2, 2}) {
    const long long s = zz + off;
    if (s >= 0 && s < n && present[static_cast<std::size_t>(s)]) ++next;
  }
  return {near, next};
}

FilledSeries sp_fill(const GappySeries& x, const SpartanParams& p) {
  validate(x);
  require_permissible(p);
  const std::size_t n = x.values.size();

  FilledSeries out;
  out.values.resize(n);
  out.source.resize(n);
  CovarianceSpec used;
  used.kind = CovKind::spartan;
  used.sp = p;
  out.params_used = used;

  for (std::size_t i = 0; i < n; ++i) {
    if (x.present[i]) {
      out.values[i] = x.values[i] + x.mean_offset;
      out.source[i] = PointSource::observed;
    } else {
      out.source[i] = PointSource::predicted;
    }
  }

  const PredictionSet set = make_prediction_set(x);
  const std::vector<std::size_t>& zp = set.indices;
  if (zp.empty()) return out;

  // The predictor minimizes the quadratic energy, so eta0 cancels; build the
  // precision matrix with eta0 = 1 to make that exact at the bit level.
  SpartanParams unit = p;
  unit.eta0 = 1.0;
  const PentaBands full = build_precision(n, unit);

  // Prediction indices are strictly increasing grid positions, so compressed
  // indices more than two apart are at least three grid steps apart and the
  // compressed system keeps the pentadiagonal profile.
  const std::size_t m = zp.size();
  PentaBands sys = make_penta(m);
  std::vector<double> rhs(m, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    sys.diag[k] = band_entry(full, zp[k], zp[k]);
    if (k + 1 < m) sys.off1[k] = band_entry(full, zp[k], zp[k + 1]);
    if (k + 2 < m) sys.off2[k] = band_entry(full, zp[k], zp[k + 2]);
    for (int off = -2; off <= 2; ++off) {
      if (off == 0) continue;
      const long long s = static_cast<long long>(zp[k]) + off;
      if (s < 0 || s >= static_cast<long long>(n)) continue;
      const std::size_t si = static_cast<std::size_t>(s);
      if (!x.present[si]) continue;
      rhs[k] -= band_entry(full, zp[k], si) * x.values[si];
    }
  }

  // Fitted parameters can sit where the free-boundary precision matrix has
  // its two edge-localized negative eigenvalues; the fill system stays
  // solvable there, so factor without a positivity requirement.
  const PentaLdlt fac(sys, PentaLdlt::allow_indefinite);
  fac.solve_in_place(rhs);

  for (std::size_t k = 0; k < m; ++k) {
    out.values[zp[k]] = rhs[k] + x.mean_offset;
  }
  return out;
}

std::vector<double> kwp_predict(
    const std::vector<std::size_t>& sample_idx,
    std::span<const double> sample_values,
    const std::vector<std::size_t>& target_idx,
    const std::function<double(std::size_t, std::size_t)>& cov) {
  if (sample_idx.size() != sample_values.size()) {
    throw InputError("kwp_predict: sample index/value length mismatch");
  }
  if (sample_idx.empty()) {
    throw InsufficientDataError("kwp_predict: empty training set");
  }
  const Eigen::Index m = static_cast<Eigen::Index>(sample_idx.size());

  Eigen::MatrixXd gram(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double c = cov(sample_idx[static_cast<std::size_t>(i)],
                           sample_idx[static_cast<std::size_t>(j)]);
      gram(i, j) = c;
      gram(j, i) = c;
    }
  }

  const Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) {
    throw ConditioningError(
        "kriging data covariance is not positive definite to working "
        "precision",
        0.0);
  }
  const double norm1 = gram.cwiseAbs().colwise().sum().maxCoeff();
  const double rcond = 1.0 / (norm1 * inverse_norm1_estimate(llt, m));
  if (!(rcond >= kRcondFloor)) {
    throw ConditioningError(
        "kriging data covariance too ill-conditioned (estimated rcond " +
            std::to_string(rcond) + ")",
        rcond);
  }

  // Dual form: one solve against the data, then a dot product per target.
  Eigen::VectorXd data(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    data[i] = sample_values[static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXd beta = llt.solve(data);

  std::vector<double> pred(target_idx.size(), 0.0);
  const long long nt = static_cast<long long>(target_idx.size());
#pragma omp parallel for schedule(static)
  for (long long t = 0; t < nt; ++t) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      acc += cov(target_idx[static_cast<std::size_t>(t)],
                 sample_idx[static_cast<std::size_t>(i)]) *
             beta[i];
    }
    pred[static_cast<std::size_t>(t)] = acc;
  }
  return pred;
}

FilledSeries kwp_fill(const GappySeries& x, const CovarianceSpec& cov,
                      std::size_t window) {
  validate(x);
  validate(cov);
  const std::size_t n = x.values.size();

  FilledSeries out;
  out.values.resize(n);
  out.source.resize(n);
  out.params_used = cov;
  for (std::size_t i = 0; i < n; ++i) {
    if (x.present[i]) {
      out.values[i] = x.values[i] + x.mean_offset;
      out.source[i] = PointSource::observed;
    } else {
      out.source[i] = PointSource::predicted;
    }
  }

  const PredictionSet set = make_prediction_set(x);
  if (set.indices.empty()) return out;
  const auto cov_fn = covariance_on_grid(cov, x.alpha);

  if (window == 0) {
    const std::vector<std::size_t> sample = present_positions(x);
    std::vector<double> values(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) {
      values[i] = x.values[sample[i]];
    }
    const std::vector<double> pred =
        kwp_predict(sample, values, set.indices, cov_fn);
    for (std::size_t k = 0; k < set.indices.size(); ++k) {
      out.values[set.indices[k]] = pred[k] + x.mean_offset;
    }
    return out;
  }

  // Windowed variant: an independent small system per prediction point,
  // built from the observed points within `window` grid steps.
  for (std::size_t k = 0; k < set.indices.size(); ++k) {
    const std::size_t z = set.indices[k];
    std::vector<std::size_t> sample;
    std::vector<double> values;
    const long long lo = static_cast<long long>(z) - static_cast<long long>(window);
    const long long hi = static_cast<long long>(z) + static_cast<long long>(window);
    for (long long s = lo; s <= hi; ++s) {
      if (s < 0 || s >= static_cast<long long>(n)) continue;
      const std::size_t si = static_cast<std::size_t>(s);
      if (x.present[si]) {
        sample.push_back(si);
        values.push_back(x.values[si]);
      }
    }
    if (sample.empty()) {
      // No observed point within reach: the simple-kriging estimate falls
      // back to the (removed) mean.
      out.values[z] = x.mean_offset;
      continue;
    }
    const std::vector<double> pred =
        kwp_predict(sample, values, {z}, cov_fn);
    out.values[z] = pred[0] + x.mean_offset;
  }
  return out;
}

}  // namespace spartan
