#pragma once

#include <cstddef>
#include <vector>

namespace spartan {

// Regularly sampled series with a presence mask. Entries of `values` at
// absent positions are meaningless and never read. mean_offset records the
// constant removed by detrend() so predictions can be shifted back.
struct GappySeries {
  std::vector<double> values;
  std::vector<char> present;  // nonzero = observed
  double alpha = 1.0;         // grid step
  double mean_offset = 0.0;
};

std::size_t n_present(const GappySeries& x) noexcept;

// Structural checks: matching lengths, alpha > 0, finite values wherever
// present, at least 3 present points. Throws InputError / InsufficientDataError.
void validate(const GappySeries& x);

// Subtract the mean of the present values, accumulating it into mean_offset.
void detrend(GappySeries& x);

// Wrap a complete vector (mask all true).
GappySeries complete_series(std::vector<double> values, double alpha);

}  // namespace spartan
