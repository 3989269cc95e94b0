#include "spartan/series.hpp"

#include <cmath>
#include <string>

#include "spartan/errors.hpp"

namespace spartan {

std::size_t n_present(const GappySeries& x) noexcept {
  std::size_t c = 0;
  for (char p : x.present) c += p ? 1 : 0;
  return c;
}

void validate(const GappySeries& x) {
  if (x.values.size() != x.present.size())
    throw InputError("series values and presence mask differ in length (" +
                     std::to_string(x.values.size()) + " vs " +
                     std::to_string(x.present.size()) + ")");
  if (!(x.alpha > 0.0) || !std::isfinite(x.alpha))
    throw InputError("series step must be positive, got " +
                     std::to_string(x.alpha));
  for (std::size_t i = 0; i < x.values.size(); ++i)
    if (x.present[i] && !std::isfinite(x.values[i]))
      throw InputError("non-finite value at present position " +
                       std::to_string(i));
  if (n_present(x) < 3)
    throw InsufficientDataError("need at least 3 present points, got " +
                                std::to_string(n_present(x)));
}

void detrend(GappySeries& x) {
  double sum = 0.0;
  std::size_t c = 0;
  for (std::size_t i = 0; i < x.values.size(); ++i)
    if (x.present[i]) {
      sum += x.values[i];
      ++c;
    }
  if (c == 0) return;
  const double m = sum / static_cast<double>(c);
  for (std::size_t i = 0; i < x.values.size(); ++i)
    if (x.present[i]) x.values[i] -= m;
  x.mean_offset += m;
}

GappySeries complete_series(std::vector<double> values, double alpha) {
  GappySeries x;
  x.present.assign(values.size(), 1);
  x.values = std::move(values);
  x.alpha = alpha;
  return x;
}

}  // namespace spartan
