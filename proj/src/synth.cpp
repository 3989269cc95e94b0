#include "spartan/synth.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "spartan/banded.hpp"
#include "spartan/covariance.hpp"
#include "spartan/errors.hpp"
#include "spartan/precision.hpp"

namespace spartan {

double NormalSampler::uniform01() {
  // 53 random mantissa bits -> uniform on [0, 1).
  return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
}

double NormalSampler::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  do {
    u1 = uniform01();
  } while (u1 <= 0.0);
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * 3.14159265358979323846 * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

std::uint64_t NormalSampler::uniform_below(std::uint64_t bound) {
  if (bound == 0) {
    throw InputError("uniform_below: bound must be positive");
  }
  // Accept only below the largest multiple of bound so the modulus is
  // unbiased; the rejection probability is at most bound / 2^64.
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = max - max % bound;
  std::uint64_t r = 0;
  do {
    r = rng_();
  } while (r >= limit);
  return r % bound;
}

GappySeries simulate_series(const SimConfig& c) {
  validate(c.spec);
  if (c.n < 3) {
    throw InputError("simulate_series: need n >= 3, got " +
                     std::to_string(c.n));
  }
  if (!(c.alpha > 0.0) || !std::isfinite(c.alpha)) {
    throw InputError("simulate_series: step must be positive and finite");
  }

  const std::size_t n = c.n;
  std::vector<double> row(n);
  for (std::size_t k = 0; k < n; ++k) {
    row[k] = classical_covariance(static_cast<double>(k) * c.alpha, c.spec);
  }

  GappySeries out;
  out.values.assign(n, c.mean);
  out.present.assign(n, 1);
  out.alpha = c.alpha;

  if (row[0] == 0.0) {
    // Zero variance: the process is the constant mean.
    return out;
  }

  Eigen::MatrixXd cov(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          row[i - j];
      cov(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) =
          row[i - j];
    }
  }

  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    // Smooth covariances (notably Gaussian) are numerically semidefinite on
    // dense grids; nudge the diagonal once and retry.
    cov.diagonal().array() += 1e-10 * row[0];
    llt.compute(cov);
    if (llt.info() != Eigen::Success) {
      throw NumericalError(
          "simulate_series: covariance matrix is not positive definite even "
          "after diagonal jitter");
    }
  }

  NormalSampler rng(c.seed);
  Eigen::VectorXd z(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    z[static_cast<Eigen::Index>(i)] = rng.next();
  }
  const Eigen::VectorXd x = llt.matrixL() * z;
  for (std::size_t i = 0; i < n; ++i) {
    out.values[i] = c.mean + x[static_cast<Eigen::Index>(i)];
  }
  return out;
}

GappySeries simulate_lattice(std::size_t n, const SpartanParams& p,
                             double mean, std::uint64_t seed) {
  // Strict factorization: the lattice model is only a valid distribution
  // where the grid precision matrix is positive definite.
  const PentaLdlt fac(build_precision(n, p));
  NormalSampler rng(seed);
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = rng.next();
  z = fac.half_inverse_apply(z);

  GappySeries out;
  out.values.resize(n);
  out.present.assign(n, 1);
  for (std::size_t i = 0; i < n; ++i) out.values[i] = mean + z[i];
  return out;
}

ThinResult thin(const GappySeries& x, double p, std::uint64_t seed) {
  validate(x);
  const std::size_t n = x.values.size();
  if (n_present(x) != n) {
    throw InputError("thin: input series must be complete");
  }
  if (!(p > 0.0) || !(p < 1.0)) {
    throw InputError("thin: fraction must lie strictly between 0 and 1");
  }
  const std::size_t k =
      static_cast<std::size_t>(std::llround(p * static_cast<double>(n)));
  if (n - k < 3) {
    throw InputError(
        "thin: fraction would leave fewer than 3 training points");
  }

  // Partial Fisher-Yates shuffle: the first k entries of the permutation are
  // the validation positions. The first draws of the stream do not depend on
  // k, so validation sets are nested across fractions for a fixed seed.
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  NormalSampler rng(seed);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j =
        i + static_cast<std::size_t>(rng.uniform_below(
                static_cast<std::uint64_t>(n - i)));
    std::swap(perm[i], perm[j]);
  }
  std::vector<std::size_t> val(perm.begin(),
                               perm.begin() + static_cast<long>(k));
  std::sort(val.begin(), val.end());

  ThinResult out;
  out.training = x;
  out.validation_index = std::move(val);
  out.validation_value.reserve(k);
  for (std::size_t idx : out.validation_index) {
    out.validation_value.push_back(x.values[idx]);
    out.training.values[idx] = std::numeric_limits<double>::quiet_NaN();
    out.training.present[idx] = 0;
  }
  return out;
}

GappySeries block_average(const GappySeries& x, std::size_t k) {
  validate(x);
  const std::size_t n = x.values.size();
  if (k < 1) {
    throw InputError("block_average: block size must be at least 1");
  }
  if (k > n) {
    throw InputError("block_average: block size " + std::to_string(k) +
                     " exceeds series length " + std::to_string(n));
  }
  const std::size_t m = n / k;
  GappySeries out;
  out.values.assign(m, std::numeric_limits<double>::quiet_NaN());
  out.present.assign(m, 0);
  out.alpha = x.alpha * static_cast<double>(k);
  out.mean_offset = x.mean_offset;
  for (std::size_t j = 0; j < m; ++j) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = j * k; i < (j + 1) * k; ++i) {
      if (x.present[i]) {
        sum += x.values[i];
        ++count;
      }
    }
    if (count > 0) {
      out.values[j] = sum / static_cast<double>(count);
      out.present[j] = 1;
    }
  }
  return out;
}

}  // namespace spartan
