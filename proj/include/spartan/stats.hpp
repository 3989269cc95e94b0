#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "spartan/series.hpp"

namespace spartan {

struct MetricSet {
  double mae = 0.0;
  double mre = 0.0;   // signed mean of (predicted - actual) / actual
  double mare = 0.0;  // mean of |predicted - actual| / |actual|
  double rmse = 0.0;
  std::size_t count = 0;
  // Points with actual == 0 are excluded from the relative metrics (mre,
  // mare) and counted here; mae/rmse still include them.
  std::size_t excluded_relative = 0;
};

// Prediction errors aggregated per neighbor category (i, j) = (observed
// nearest neighbors, observed second-nearest neighbors) and in total, plus
// the Pearson correlation between predicted and actual over all points.
struct ErrorReport {
  std::array<std::array<MetricSet, 3>, 3> by_category{};
  MetricSet total;
  double r = 0.0;
};

ErrorReport error_stats(std::span<const double> predicted,
                        std::span<const double> actual,
                        std::span<const std::pair<int, int>> categories);

struct AcfResult {
  std::vector<double> rho;          // rho[k], k = 0..max_lag; NaN if no pairs
  std::vector<std::size_t> pairs;   // co-present pair count per lag
};

// Empirical autocorrelation of a gappy series: products over co-present
// pairs about the observed mean, normalized by the biased sample variance.
AcfResult empirical_acf(const GappySeries& x, std::size_t max_lag);

enum class ObjectiveKind { dm, nll };

struct SurfaceRanges {
  double eta1_min = -1.9;
  double eta1_max = 5.0;
  std::size_t eta1_steps = 40;
  double xi_min = 0.2;
  double xi_max = 5.0;
  std::size_t xi_steps = 40;
};

struct SurfaceGrid {
  ObjectiveKind kind = ObjectiveKind::dm;
  std::vector<double> eta1_axis;
  std::vector<double> xi_axis;
  // Row-major: values[i * xi_axis.size() + j] for (eta1_axis[i], xi_axis[j]);
  // NaN marks non-permissible or non-evaluable cells.
  std::vector<double> values;
  bool has_optimum = false;  // optimum from the corresponding fitter
  double opt_eta1 = 0.0;
  double opt_xi = 0.0;
};

SurfaceGrid surface_grid(const GappySeries& x, ObjectiveKind kind,
                         const SurfaceRanges& ranges);

}  // namespace spartan
