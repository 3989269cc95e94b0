#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "spartan/params.hpp"
#include "spartan/series.hpp"

namespace spartan {

// Deterministic normal generator: a 64-bit Mersenne Twister feeding an
// explicit Box-Muller transform. Standard-library distributions are not used
// because their output streams differ between implementations; this one
// produces the same bytes everywhere for a given seed.
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : rng_(seed) {}

  // Standard normal draw.
  double next();

  // Uniform draw in [0, 1) with 53 bits of mantissa.
  double uniform01();

  // Unbiased uniform integer in [0, bound); bound must be positive.
  std::uint64_t uniform_below(std::uint64_t bound);

 private:
  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

struct SimConfig {
  CovarianceSpec spec;
  std::size_t n = 0;
  double mean = 0.0;
  std::uint64_t seed = 0;
  double alpha = 1.0;
};

// Draw a complete series from the stationary model: dense Cholesky of the
// closed-form covariance on the sampling grid. Exact for every covariance
// kind, at O(n^2) memory and O(n^3) time; see simulate_lattice for the
// linear-cost alternative restricted to the lattice model.
GappySeries simulate_series(const SimConfig& c);

// Draw a complete series whose covariance is the inverse of the grid
// precision matrix (the lattice model with free boundaries), in O(n) time
// through the banded factorization. Requires parameters for which that
// matrix is positive definite.
GappySeries simulate_lattice(std::size_t n, const SpartanParams& p,
                             double mean, std::uint64_t seed);

struct ThinResult {
  GappySeries training;  // input with the validation positions blanked
  std::vector<std::size_t> validation_index;
  std::vector<double> validation_value;
};

// Remove round(p * n) positions uniformly at random for validation. For a
// fixed seed the validation sets are nested across p: a larger fraction
// extends the smaller one.
ThinResult thin(const GappySeries& x, double p, std::uint64_t seed);

// Coarse-grain by non-overlapping blocks of k points; element j is the mean
// of the observed values in block j (a block with no observed value stays
// missing) and the step becomes k * alpha. Output length is floor(n / k); a
// trailing partial block is dropped.
GappySeries block_average(const GappySeries& x, std::size_t k);

}  // namespace spartan
