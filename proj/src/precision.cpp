#include "spartan/precision.hpp"

#include <string>

#include "spartan/errors.hpp"
#include "spartan/parallel.hpp"

namespace spartan {

namespace {

PentaBands build_scaled(std::size_t n, const SpartanParams& p, double eta0) {
  require_permissible(p);
  if (n < 3)
    throw InputError("precision matrix needs at least 3 grid points, got " +
                     std::to_string(n));
  const double r = p.xi / p.alpha;
  const double c1 = p.eta1 * r * r;
  const double c2 = r * r * r * r;

  PentaBands a = make_penta(n);
  for (std::size_t i = 0; i < n; ++i) a.diag[i] = 1.0;
  // First-difference stencil [-1, 1] accumulated over adjacent pairs.
  for (std::size_t k = 0; k + 1 < n; ++k) {
    a.diag[k] += c1;
    a.diag[k + 1] += c1;
    a.off1[k] -= c1;
  }
  // Second-difference stencil [1, -2, 1] accumulated over interior triples.
  for (std::size_t k = 0; k + 2 < n; ++k) {
    a.diag[k] += c2;
    a.diag[k + 1] += 4.0 * c2;
    a.diag[k + 2] += c2;
    a.off1[k] -= 2.0 * c2;
    a.off1[k + 1] -= 2.0 * c2;
    a.off2[k] += c2;
  }
  const double scale = 1.0 / (eta0 * p.xi);
  for (double& v : a.diag) v *= scale;
  for (double& v : a.off1) v *= scale;
  for (double& v : a.off2) v *= scale;
  return a;
}

}  // namespace

PentaBands build_precision(std::size_t n, const SpartanParams& p) {
  return build_scaled(n, p, p.eta0);
}

PentaBands build_precision_unit_eta0(std::size_t n, const SpartanParams& p) {
  return build_scaled(n, p, 1.0);
}

StencilSums stencil_sums_serial(std::span<const double> x) {
  StencilSums s;
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) s.s0 += x[i] * x[i];
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double d = x[i + 1] - x[i];
    s.s1 += d * d;
  }
  for (std::size_t i = 0; i + 2 < n; ++i) {
    const double d = x[i + 2] - 2.0 * x[i + 1] + x[i];
    s.s2 += d * d;
  }
  return s;
}

StencilSums stencil_sums(std::span<const double> x) {
  const std::size_t n = x.size();
  return chunked_reduce<StencilSums>(
      n, StencilSums{},
      [&](std::size_t b, std::size_t e) {
        StencilSums s;
        for (std::size_t i = b; i < e; ++i) {
          s.s0 += x[i] * x[i];
          if (i + 1 < n) {
            const double d = x[i + 1] - x[i];
            s.s1 += d * d;
          }
          if (i + 2 < n) {
            const double d = x[i + 2] - 2.0 * x[i + 1] + x[i];
            s.s2 += d * d;
          }
        }
        return s;
      },
      [](StencilSums acc, const StencilSums& p) {
        acc.s0 += p.s0;
        acc.s1 += p.s1;
        acc.s2 += p.s2;
        return acc;
      });
}

double energy(const StencilSums& s, const SpartanParams& p) {
  require_permissible(p);
  const double r = p.xi / p.alpha;
  return (s.s0 + p.eta1 * r * r * s.s1 + r * r * r * r * s.s2) /
         (2.0 * p.eta0 * p.xi);
}

double energy(std::span<const double> x, const SpartanParams& p) {
  return energy(stencil_sums(x), p);
}

}  // namespace spartan
