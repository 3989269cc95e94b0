#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "spartan/errors.hpp"
#include "spartan/moments.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace spartan;

namespace {

GappySeries series_of(std::vector<double> v, std::vector<char> mask,
                      double alpha) {
  GappySeries x;
  x.values = std::move(v);
  x.present = std::move(mask);
  x.alpha = alpha;
  return x;
}

}  // namespace

TEST_CASE("sample moments by hand expansion") {
  const GappySeries x = series_of({1, 2, 4}, {1, 1, 1}, 1.0);
  const MomentSummary m = sample_moments(x);
  CHECK(m.s0 == doctest::Approx(7.0));   // (1 + 4 + 16) / 3
  CHECK(m.s1 == doctest::Approx(2.5));   // (1 + 4) / 2
  CHECK(m.s2 == doctest::Approx(1.0));   // (4 - 4 + 1)^2 / 1
  CHECK(m.n0 == 3);
  CHECK(m.n1 == 2);
  CHECK(m.n2 == 1);
}

TEST_CASE("gaps knock out pairs and triples") {
  const GappySeries x = series_of({1, 2, 0, 3}, {1, 1, 0, 1}, 1.0);
  const MomentSummary m = sample_moments(x);
  CHECK(m.s0 == doctest::Approx(14.0 / 3.0));
  CHECK(m.s1 == doctest::Approx(1.0));  // only the (1,2) pair survives
  CHECK(m.n1 == 1);
  CHECK(m.n2 == 0);  // no fully present triple
  CHECK(m.s2 == 0.0);
}

TEST_CASE("constant series have vanishing difference moments") {
  const GappySeries x = series_of(std::vector<double>(20, 5.0),
                                  std::vector<char>(20, 1), 2.0);
  const MomentSummary m = sample_moments(x);
  CHECK(m.s0 == doctest::Approx(25.0));
  CHECK(m.s1 == 0.0);
  CHECK(m.s2 == 0.0);
  CHECK(m.n1 == 19);
  CHECK(m.n2 == 18);
}

TEST_CASE("step scaling enters squared differences") {
  const GappySeries x = series_of({0, 1, 4}, {1, 1, 1}, 0.5);
  const MomentSummary m = sample_moments(x);
  CHECK(m.s1 == doctest::Approx((4.0 + 36.0) / 2.0));      // (d/0.5)^2 averaged
  CHECK(m.s2 == doctest::Approx(std::pow(2.0 / 0.25, 2)));  // (4-2+0)/alpha^2
}

TEST_CASE("serial and chunked moment passes agree") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::bernoulli_distribution keep(0.7);
  std::vector<double> v(30000);
  std::vector<char> mask(30000);
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = u(rng);
    mask[i] = keep(rng) ? 1 : 0;
  }
  const GappySeries x = series_of(std::move(v), std::move(mask), 0.7);
  const MomentSummary a = sample_moments_serial(x);
  const MomentSummary b = sample_moments(x);
  CHECK(a.n0 == b.n0);
  CHECK(a.n1 == b.n1);
  CHECK(a.n2 == b.n2);
  CHECK(a.s0 == doctest::Approx(b.s0).epsilon(1e-13));
  CHECK(a.s1 == doctest::Approx(b.s1).epsilon(1e-13));
  CHECK(a.s2 == doctest::Approx(b.s2).epsilon(1e-13));

#ifdef _OPENMP
  // the chunked pass must give identical bytes for any thread count
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const MomentSummary one = sample_moments(x);
  omp_set_num_threads(3);
  const MomentSummary three = sample_moments(x);
  omp_set_num_threads(saved);
  CHECK(one.s0 == three.s0);
  CHECK(one.s1 == three.s1);
  CHECK(one.s2 == three.s2);
#endif
}

TEST_CASE("expected moments at the critical shape coefficient") {
  const ExpectedMoments e = expected_moments(2.0, 1.0, 1.0);
  CHECK(e.e0 == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(e.e1 == doctest::Approx(0.13212055882855767).epsilon(1e-14));
  CHECK(e.e2 == doctest::Approx(0.23148516016914966).epsilon(1e-14));
}

TEST_CASE("expected moments positive over a permissible sweep") {
  for (double eta1 : {-1.95, -1.0, 0.0, 2.0, 7.0, 80.0})
    for (double xi : {0.3, 1.0, 4.0}) {
      const ExpectedMoments e = expected_moments(eta1, xi, 1.0);
      CAPTURE(eta1);
      CAPTURE(xi);
      CHECK(e.e0 > 0.0);
      CHECK(e.e1 > 0.0);
      CHECK(e.e2 > 0.0);
    }
  CHECK_THROWS_AS(expected_moments(-2.0, 1.0, 1.0), PermissibilityError);
}

TEST_CASE("expected moments against the quadrature oracle") {
  const double g0 = oracle::cov_quadrature_normalized(0.0, 0.0);
  const double g1 = oracle::cov_quadrature_normalized(1.0, 0.0);
  const double g2 = oracle::cov_quadrature_normalized(2.0, 0.0);
  const ExpectedMoments e = expected_moments(0.0, 1.0, 1.0);
  CHECK(std::abs(e.e0 - g0) <= 1e-6);
  CHECK(std::abs(e.e1 - 2.0 * (g0 - g1)) <= 1e-6);
  CHECK(std::abs(e.e2 - 2.0 * (3.0 * g0 + g2 - 4.0 * g1)) <= 1e-6);
}

TEST_CASE("moment-ratio distance") {
  const ExpectedMoments e = expected_moments(2.0, 1.0, 1.0);
  MomentSummary m;
  m.n0 = m.n1 = m.n2 = 10;

  SUBCASE("zero at exactly matching ratios") {
    m.s0 = e.e0;
    m.s1 = e.e1;
    m.s2 = e.e2;
    CHECK(dm_objective(2.0, 1.0, m, 1.0) == doctest::Approx(0.0));
    // eta0 cancels: scaling all moments jointly changes nothing
    m.s0 *= 7.3;
    m.s1 *= 7.3;
    m.s2 *= 7.3;
    CHECK(dm_objective(2.0, 1.0, m, 1.0) == doctest::Approx(0.0));
  }

  SUBCASE("pinned value for a doubled first ratio") {
    m.s0 = e.e0;
    m.s1 = 2.0 * e.e1;
    m.s2 = 2.0 * e.e2;  // second ratio still matches
    CHECK(dm_objective(2.0, 1.0, m, 1.0) ==
          doctest::Approx(0.17157287525381).epsilon(1e-12));
  }

  SUBCASE("degenerate sample moments are rejected") {
    m.s0 = 1.0;
    m.s1 = 0.5;
    m.s2 = 0.25;
    m.n2 = 0;
    CHECK_THROWS_AS(dm_objective(2.0, 1.0, m, 1.0), DegenerateInputError);
    m.n2 = 3;
    m.s1 = 0.0;
    CHECK_THROWS_AS(dm_objective(2.0, 1.0, m, 1.0), DegenerateInputError);
  }
}
