#include "spartan/moments.hpp"

#include <cmath>
#include <limits>

#include "spartan/covariance.hpp"
#include "spartan/errors.hpp"
#include "spartan/parallel.hpp"

namespace spartan {

namespace {

struct MomentAccum {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0;
  std::size_t n0 = 0, n1 = 0, n2 = 0;
};

// Accumulate every stencil anchored at i: the point itself, the forward pair
// (i, i+1), and the centered triple (i-1, i, i+1).
inline void accumulate_at(const GappySeries& x, std::size_t i, double inv_a,
                          double inv_a2, MomentAccum& a) {
  const std::size_t n = x.values.size();
  if (x.present[i]) {
    a.s0 += x.values[i] * x.values[i];
    ++a.n0;
  }
  if (i + 1 < n && x.present[i] && x.present[i + 1]) {
    const double d = (x.values[i + 1] - x.values[i]) * inv_a;
    a.s1 += d * d;
    ++a.n1;
  }
  if (i >= 1 && i + 1 < n && x.present[i - 1] && x.present[i] &&
      x.present[i + 1]) {
    const double d =
        (x.values[i + 1] - 2.0 * x.values[i] + x.values[i - 1]) * inv_a2;
    a.s2 += d * d;
    ++a.n2;
  }
}

MomentSummary finalize(const MomentAccum& a) {
  MomentSummary m;
  m.n0 = a.n0;
  m.n1 = a.n1;
  m.n2 = a.n2;
  m.s0 = a.n0 ? a.s0 / static_cast<double>(a.n0) : 0.0;
  m.s1 = a.n1 ? a.s1 / static_cast<double>(a.n1) : 0.0;
  m.s2 = a.n2 ? a.s2 / static_cast<double>(a.n2) : 0.0;
  return m;
}

}  // namespace

MomentSummary sample_moments_serial(const GappySeries& x) {
  const double inv_a = 1.0 / x.alpha;
  const double inv_a2 = inv_a * inv_a;
  MomentAccum a;
  for (std::size_t i = 0; i < x.values.size(); ++i)
    accumulate_at(x, i, inv_a, inv_a2, a);
  return finalize(a);
}

MomentSummary sample_moments(const GappySeries& x) {
  const double inv_a = 1.0 / x.alpha;
  const double inv_a2 = inv_a * inv_a;
  MomentAccum total = chunked_reduce<MomentAccum>(
      x.values.size(), MomentAccum{},
      [&](std::size_t b, std::size_t e) {
        MomentAccum a;
        for (std::size_t i = b; i < e; ++i) accumulate_at(x, i, inv_a, inv_a2, a);
        return a;
      },
      [](MomentAccum acc, const MomentAccum& p) {
        acc.s0 += p.s0;
        acc.s1 += p.s1;
        acc.s2 += p.s2;
        acc.n0 += p.n0;
        acc.n1 += p.n1;
        acc.n2 += p.n2;
        return acc;
      });
  return finalize(total);
}

ExpectedMoments expected_moments(double eta1, double xi, double alpha) {
  SpartanParams p{1.0, eta1, xi, alpha};
  require_permissible(p);
  const double g0 = spartan_covariance_normalized(0.0, eta1);
  const double g1 = spartan_covariance_normalized(alpha / xi, eta1);
  const double g2 = spartan_covariance_normalized(2.0 * alpha / xi, eta1);
  ExpectedMoments e;
  e.e0 = g0;
  e.e1 = 2.0 * (g0 - g1) / (alpha * alpha);
  e.e2 = 2.0 * (3.0 * g0 + g2 - 4.0 * g1) / (alpha * alpha * alpha * alpha);
  return e;
}

double dm_objective(double eta1, double xi, const MomentSummary& m,
                    double alpha) {
  if (m.n1 == 0 || m.n2 == 0 || !(m.s0 > 0.0) || !(m.s1 > 0.0) ||
      !(m.s2 > 0.0))
    throw DegenerateInputError(
        "moment-ratio distance needs positive sample moments with nonzero "
        "pair and triple counts");
  const ExpectedMoments e = expected_moments(eta1, xi, alpha);
  if (!(e.e0 > 0.0) || !(e.e1 > 0.0) || !(e.e2 > 0.0) ||
      !std::isfinite(e.e0) || !std::isfinite(e.e1) || !std::isfinite(e.e2))
    return std::numeric_limits<double>::infinity();
  const double r1 = 1.0 - std::sqrt((m.s1 / m.s0) * (e.e0 / e.e1));
  const double r2 = 1.0 - std::sqrt((m.s2 / m.s1) * (e.e1 / e.e2));
  return r1 * r1 + r2 * r2;
}

}  // namespace spartan
