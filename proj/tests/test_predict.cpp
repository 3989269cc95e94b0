#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "spartan/covariance.hpp"
#include "spartan/errors.hpp"
#include "spartan/precision.hpp"
#include "spartan/predict.hpp"
#include "spartan/synth.hpp"

using namespace spartan;

namespace {

GappySeries make_series(std::vector<double> v, std::vector<char> mask,
                        double alpha = 1.0) {
  GappySeries x;
  x.values = std::move(v);
  x.present = std::move(mask);
  x.alpha = alpha;
  return x;
}

// Gaussian conditional mean oracle: invert the full precision matrix to get
// the covariance, then condition the missing block on the observed one with
// dense linear algebra.
std::vector<double> conditional_mean_oracle(const GappySeries& x,
                                            const SpartanParams& p) {
  const std::size_t n = x.values.size();
  const Eigen::MatrixXd J = oracle::to_dense(build_precision(n, p));
  const Eigen::MatrixXd cov = J.fullPivLu().inverse();

  std::vector<std::size_t> miss, obs;
  for (std::size_t i = 0; i < n; ++i) {
    (x.present[i] ? obs : miss).push_back(i);
  }
  Eigen::MatrixXd c_oo(obs.size(), obs.size());
  Eigen::MatrixXd c_mo(miss.size(), obs.size());
  Eigen::VectorXd xo(static_cast<Eigen::Index>(obs.size()));
  for (std::size_t a = 0; a < obs.size(); ++a) {
    xo[static_cast<Eigen::Index>(a)] = x.values[obs[a]];
    for (std::size_t b = 0; b < obs.size(); ++b) {
      c_oo(a, b) = cov(static_cast<Eigen::Index>(obs[a]),
                       static_cast<Eigen::Index>(obs[b]));
    }
  }
  for (std::size_t a = 0; a < miss.size(); ++a) {
    for (std::size_t b = 0; b < obs.size(); ++b) {
      c_mo(a, b) = cov(static_cast<Eigen::Index>(miss[a]),
                       static_cast<Eigen::Index>(obs[b]));
    }
  }
  const Eigen::VectorXd cond = c_mo * c_oo.fullPivLu().solve(xo);
  std::vector<double> out(cond.data(), cond.data() + cond.size());
  return out;
}

GappySeries random_gappy(std::size_t n, double missing_prob,
                         std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 2.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  GappySeries x;
  x.values.resize(n);
  x.present.resize(n);
  std::size_t kept = 0;
  for (std::size_t i = 0; i < n; ++i) {
    x.values[i] = gauss(rng);
    x.present[i] = unif(rng) >= missing_prob ? 1 : 0;
    kept += x.present[i];
  }
  // Guarantee enough observed points for the solvers.
  for (std::size_t i = 0; kept < 3 && i < n; ++i) {
    if (!x.present[i]) {
      x.present[i] = 1;
      ++kept;
    }
  }
  return x;
}

}  // namespace

TEST_CASE("neighbor classification counts observed points at one and two "
          "steps") {
  // Observed at positions {1, 2, 4, 5} of a 7-point grid; position 3 missing.
  const std::vector<char> mask = {0, 1, 1, 0, 1, 1, 0};
  CHECK(classify_category(3, mask) == std::pair<int, int>(2, 2));
  CHECK(classify_category(0, mask) == std::pair<int, int>(1, 1));
  CHECK(classify_category(6, mask) == std::pair<int, int>(1, 1));

  const std::vector<char> lone = {1, 0, 0, 0, 0};
  CHECK(classify_category(3, lone) == std::pair<int, int>(0, 0));
  CHECK(classify_category(2, lone) == std::pair<int, int>(0, 1));
  CHECK_THROWS_AS(classify_category(9, lone), InputError);
}

TEST_CASE("prediction set lists missing positions with their observed "
          "neighborhoods") {
  const GappySeries x =
      make_series({1, 2, 0, 4, 5, 0, 7}, {1, 1, 0, 1, 1, 0, 1});
  const PredictionSet set = make_prediction_set(x);
  REQUIRE(set.indices == std::vector<std::size_t>{2, 5});
  REQUIRE(set.neighborhoods.size() == 2);
  CHECK(set.neighborhoods[0] == std::vector<std::size_t>{0, 1, 3, 4});
  CHECK(set.neighborhoods[1] == std::vector<std::size_t>{3, 4, 6});
}

TEST_CASE("single interior gap reproduces the closed-form weights") {
  // At eta1 = 1, xi = alpha = 1 the interior row gives
  //   xhat = [5 (x(-1) + x(+1)) - (x(-2) + x(+2))] / 9.
  const std::vector<double> vals = {1.3, -0.4, 0.0, 2.2, 0.7};
  GappySeries x = make_series(vals, {1, 1, 0, 1, 1});
  SpartanParams p;
  p.eta1 = 1.0;
  p.xi = 1.0;
  const FilledSeries filled = sp_fill(x, p);
  const double expect = (5.0 * (-0.4 + 2.2) - (1.3 + 0.7)) / 9.0;
  CHECK(filled.values[2] == doctest::Approx(expect).epsilon(1e-14));
  CHECK(filled.source[2] == PointSource::predicted);
  CHECK(filled.source[1] == PointSource::observed);
  CHECK(filled.values[1] == -0.4);
}

TEST_CASE("all-zero data predicts zero") {
  GappySeries x = make_series({0, 0, 0, 0, 0, 0}, {1, 1, 0, 0, 1, 1});
  SpartanParams p;
  p.eta1 = 0.5;
  p.xi = 1.4;
  const FilledSeries filled = sp_fill(x, p);
  for (double v : filled.values) CHECK(v == 0.0);
}

TEST_CASE("gap filling matches the dense conditional-mean oracle") {
  const std::vector<std::size_t> sizes = {20, 100, 200};
  std::mt19937_64 seeds(1234);
  for (std::size_t n : sizes) {
    for (int rep = 0; rep < 5; ++rep) {
      const GappySeries x = random_gappy(n, 0.3, seeds());
      SpartanParams p;
      p.eta1 = 1.5;
      p.xi = 1.2;
      p.eta0 = 2.0;
      const FilledSeries filled = sp_fill(x, p);
      const std::vector<double> oracle_vals = conditional_mean_oracle(x, p);
      const PredictionSet set = make_prediction_set(x);
      REQUIRE(set.indices.size() == oracle_vals.size());
      for (std::size_t k = 0; k < set.indices.size(); ++k) {
        CAPTURE(n);
        CAPTURE(rep);
        CAPTURE(k);
        CHECK(filled.values[set.indices[k]] ==
              doctest::Approx(oracle_vals[k]).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("gap filling matches the oracle where the precision matrix is "
          "indefinite") {
  // Fitted parameters often land where the free-boundary matrix carries two
  // negative edge modes; the conditional mean is still well defined.
  SpartanParams p;
  p.eta1 = -1.5;
  p.xi = 1.0;
  const GappySeries x = random_gappy(80, 0.25, 777);
  const FilledSeries filled = sp_fill(x, p);
  const std::vector<double> oracle_vals = conditional_mean_oracle(x, p);
  const PredictionSet set = make_prediction_set(x);
  for (std::size_t k = 0; k < set.indices.size(); ++k) {
    CHECK(filled.values[set.indices[k]] ==
          doctest::Approx(oracle_vals[k]).epsilon(1e-8));
  }
}

TEST_CASE("predictions are independent of the scale coefficient") {
  const GappySeries x = random_gappy(60, 0.3, 99);
  SpartanParams a;
  a.eta1 = 0.7;
  a.xi = 2.0;
  a.eta0 = 1.0;
  SpartanParams b = a;
  b.eta0 = 10.0;
  const FilledSeries fa = sp_fill(x, a);
  const FilledSeries fb = sp_fill(x, b);
  for (std::size_t i = 0; i < fa.values.size(); ++i) {
    CHECK(fa.values[i] == fb.values[i]);  // bit-identical by construction
  }
}

TEST_CASE("predictions are linear in the observed values") {
  SpartanParams p;
  p.eta1 = 2.0;
  p.xi = 1.5;
  const GappySeries xa = random_gappy(50, 0.3, 41);
  GappySeries xb = xa;
  {
    std::mt19937_64 rng(42);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (double& v : xb.values) v = gauss(rng);
  }
  GappySeries xsum = xa;
  for (std::size_t i = 0; i < xsum.values.size(); ++i) {
    xsum.values[i] = 2.0 * xa.values[i] + 3.0 * xb.values[i];
  }
  const FilledSeries fa = sp_fill(xa, p);
  const FilledSeries fb = sp_fill(xb, p);
  const FilledSeries fs = sp_fill(xsum, p);
  for (std::size_t i = 0; i < fa.values.size(); ++i) {
    CHECK(fs.values[i] ==
          doctest::Approx(2.0 * fa.values[i] + 3.0 * fb.values[i])
              .epsilon(1e-10));
  }
}

TEST_CASE("mid-gap predictions equal the oracle with the mean restored") {
  GappySeries x = make_series({7.5, 8.5, 9.5, 0, 0, 0, 10.5, 6.5, 9.0},
                              {1, 1, 1, 0, 0, 0, 1, 1, 1});
  CHECK(classify_category(4, x.present) == std::pair<int, int>(0, 2));
  detrend(x);
  SpartanParams p;
  p.eta1 = 1.0;
  p.xi = 1.0;
  const FilledSeries filled = sp_fill(x, p);
  const double mean = x.mean_offset;
  CHECK(mean == doctest::Approx((7.5 + 8.5 + 9.5 + 10.5 + 6.5 + 9.0) / 6.0));
  const std::vector<double> oracle_vals = conditional_mean_oracle(x, p);
  const PredictionSet set = make_prediction_set(x);
  for (std::size_t k = 0; k < set.indices.size(); ++k) {
    CHECK(filled.values[set.indices[k]] ==
          doctest::Approx(oracle_vals[k] + mean).epsilon(1e-10));
  }
}

TEST_CASE("deep inside a long gap the prediction shrinks toward the removed "
          "mean") {
  // Center of a five-point gap: nothing observed within two steps.
  const std::size_t n = 11;
  GappySeries x;
  x.values = {4.0, 6.0, 8.0, 0, 0, 0, 0, 0, 2.0, 4.0, 6.0};
  x.present = {1, 1, 1, 0, 0, 0, 0, 0, 1, 1, 1};
  REQUIRE(x.values.size() == n);
  CHECK(classify_category(5, x.present) == std::pair<int, int>(0, 0));
  detrend(x);
  SpartanParams p;
  p.eta1 = 0.0;
  p.xi = 1.0;
  const FilledSeries filled = sp_fill(x, p);
  const std::vector<double> oracle_vals = conditional_mean_oracle(x, p);
  const PredictionSet set = make_prediction_set(x);
  double max_obs_dev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (x.present[i]) max_obs_dev = std::max(max_obs_dev, std::abs(x.values[i]));
  }
  for (std::size_t k = 0; k < set.indices.size(); ++k) {
    CHECK(filled.values[set.indices[k]] ==
          doctest::Approx(oracle_vals[k] + x.mean_offset).epsilon(1e-10));
  }
  // The central estimate has decayed toward the mean relative to the data.
  CHECK(std::abs(filled.values[5] - x.mean_offset) < max_obs_dev);
}

TEST_CASE("gapless input is returned unchanged") {
  GappySeries x = make_series({1.5, 2.5, 0.5, 3.5}, {1, 1, 1, 1});
  SpartanParams p;
  p.eta1 = 1.0;
  p.xi = 1.0;
  const FilledSeries filled = sp_fill(x, p);
  CHECK(filled.values == x.values);
  for (PointSource s : filled.source) CHECK(s == PointSource::observed);
}

TEST_CASE("filling refuses fewer than three observed points") {
  GappySeries x = make_series({1, 2, 3, 4, 5}, {1, 1, 0, 0, 0});
  SpartanParams p;
  CHECK_THROWS_AS(sp_fill(x, p), InsufficientDataError);
  CovarianceSpec cov;
  CHECK_THROWS_AS(kwp_fill(x, cov), InsufficientDataError);
}

TEST_CASE("three-point configurations agree exactly between the energy "
          "predictor and kriging on the inverse precision matrix") {
  // Small chains around one missing point: all combinations of observed
  // neighbors within two steps, kriging covariance taken as the inverse of
  // the full-grid precision matrix, where the two predictors coincide.
  SpartanParams p;
  p.eta1 = 1.0;
  p.xi = 1.3;
  const std::size_t n = 9;
  const Eigen::MatrixXd J = oracle::to_dense(build_precision(n, p));
  const Eigen::MatrixXd cov = J.fullPivLu().inverse();
  const auto cov_fn = [&](std::size_t i, std::size_t j) {
    return cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  };

  const std::size_t z = 4;  // interior target
  const std::vector<std::vector<std::size_t>> configs = {
      {3, 5},  {2, 3},    {5, 6},    {2, 6},    {3, 6},
      {2, 5},  {2, 3, 5}, {3, 5, 6}, {2, 3, 5, 6}, {2, 3, 6}};
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> gauss(0.0, 1.0);

  for (const auto& sample_idx : configs) {
    GappySeries x;
    x.values.assign(n, 0.0);
    x.present.assign(n, 0);
    for (std::size_t s : sample_idx) {
      x.present[s] = 1;
      x.values[s] = gauss(rng);
    }
    // pad far-away observed points so the series stays valid (>= 3 points)
    if (sample_idx.size() < 3) {
      x.present[0] = 1;
      x.values[0] = gauss(rng);
      x.present[8] = 1;
      x.values[8] = gauss(rng);
    }

    std::vector<std::size_t> sample_all;
    std::vector<double> sample_vals;
    for (std::size_t i = 0; i < n; ++i) {
      if (x.present[i]) {
        sample_all.push_back(i);
        sample_vals.push_back(x.values[i]);
      }
    }

    const FilledSeries sp = sp_fill(x, p);
    const std::vector<double> kw =
        kwp_predict(sample_all, sample_vals, {z}, cov_fn);
    CAPTURE(sample_idx.size());
    CHECK(sp.values[z] == doctest::Approx(kw[0]).epsilon(1e-9));
  }
}

TEST_CASE("kriging reproduces a training datum at a coinciding target") {
  CovarianceSpec cov;
  cov.kind = CovKind::exponential;
  cov.sigma = 2.0;
  cov.b = 4.0;
  const auto cov_fn = [&](std::size_t i, std::size_t j) {
    const double lag = i > j ? double(i - j) : double(j - i);
    return classical_covariance(lag, cov);
  };
  const std::vector<std::size_t> sample = {0, 1, 3, 4, 7};
  const std::vector<double> vals = {1.0, -2.0, 0.5, 3.0, 1.5};
  const std::vector<double> pred = kwp_predict(sample, vals, {3, 0, 7}, cov_fn);
  CHECK(pred[0] == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(pred[1] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(pred[2] == doctest::Approx(1.5).epsilon(1e-8));
}

TEST_CASE("kriging fill agrees with the windowed variant when the window "
          "spans the series") {
  const GappySeries x = random_gappy(40, 0.3, 31);
  CovarianceSpec cov;
  cov.kind = CovKind::exponential;
  cov.sigma = 1.5;
  cov.b = 3.0;
  const FilledSeries full = kwp_fill(x, cov);
  const FilledSeries windowed = kwp_fill(x, cov, 40);
  for (std::size_t i = 0; i < full.values.size(); ++i) {
    CHECK(full.values[i] == doctest::Approx(windowed.values[i]).epsilon(1e-9));
  }
}

TEST_CASE("kriging rejects an ill-conditioned data covariance") {
  // A smooth Gaussian covariance on a dense grid is numerically rank
  // deficient well below machine precision.
  GappySeries x;
  const std::size_t n = 120;
  x.values.resize(n);
  x.present.assign(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    x.values[i] = std::sin(0.1 * static_cast<double>(i));
  }
  x.present[60] = 0;
  CovarianceSpec cov;
  cov.kind = CovKind::gaussian;
  cov.sigma = 10.0;
  cov.b = 6.0;
  try {
    kwp_fill(x, cov);
    FAIL("expected ConditioningError");
  } catch (const ConditioningError& e) {
    CHECK(e.rcond_estimate() >= 0.0);
    CHECK(e.rcond_estimate() < 1e-10);
  }
}

TEST_CASE("mean restoration round trip") {
  GappySeries x = make_series({10.0, 12.0, 0.0, 14.0, 11.0, 13.0},
                              {1, 1, 0, 1, 1, 1});
  detrend(x);
  SpartanParams p;
  p.eta1 = 1.0;
  p.xi = 1.0;
  const FilledSeries filled = sp_fill(x, p);
  CHECK(filled.values[0] == doctest::Approx(10.0).epsilon(1e-14));
  CHECK(filled.values[4] == doctest::Approx(11.0).epsilon(1e-14));
  // Predicted value lives on the original scale, near the observed level.
  CHECK(filled.values[2] > 5.0);
  CHECK(filled.values[2] < 20.0);
}
