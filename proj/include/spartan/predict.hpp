#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "spartan/params.hpp"
#include "spartan/series.hpp"

namespace spartan {

enum class PointSource { observed, predicted };

// A complete series after gap filling. Observed positions carry the original
// data; predicted positions carry the estimate plus the removed mean.
struct FilledSeries {
  std::vector<double> values;
  std::vector<PointSource> source;
  CovarianceSpec params_used;  // kind == spartan wraps SpartanParams
};

// Missing positions plus, for every one of them, the observed positions at
// most two grid steps away (the direct inputs of the local predictor).
struct PredictionSet {
  std::vector<std::size_t> indices;
  std::vector<std::vector<std::size_t>> neighborhoods;
};

PredictionSet make_prediction_set(const GappySeries& x);

// Counts the observed nearest (offset +-1) and second-nearest (offset +-2)
// neighbors of a missing position; grid ends count only existing offsets.
std::pair<int, int> classify_category(std::size_t z,
                                      const std::vector<char>& present);

// Fill the gaps by minimizing the joint energy over the missing values: solve
// J_pp xhat = -J_ps x_s with J the full-grid precision matrix. Because the
// missing positions are strictly increasing grid indices, J_pp is again
// pentadiagonal after compression, so the solve is linear in the gap count.
// eta0 drops out and is normalized away, making the output bit-identical
// under eta0 rescaling.
FilledSeries sp_fill(const GappySeries& x, const SpartanParams& p);

// Simple-kriging fill: xhat(z) = g_z' G_ss^{-1} x_s with the full training
// set (window = 0) or the observed points within `window` grid steps. The
// full-set variant reuses one factorization for every prediction point.
FilledSeries kwp_fill(const GappySeries& x, const CovarianceSpec& cov,
                      std::size_t window = 0);

// Index-based kriging core with a pluggable covariance entry cov(i, j) on
// grid positions; used directly by the discrete-equivalence diagnostics
// (covariance taken as the inverse precision matrix) and by kwp_fill.
// Targets may coincide with sample positions, in which case the datum is
// reproduced exactly.
std::vector<double> kwp_predict(
    const std::vector<std::size_t>& sample_idx,
    std::span<const double> sample_values,
    const std::vector<std::size_t>& target_idx,
    const std::function<double(std::size_t, std::size_t)>& cov);

}  // namespace spartan
