#include "spartan/banded.hpp"

#include <cmath>
#include <string>

#include "spartan/errors.hpp"

namespace spartan {

PentaBands make_penta(std::size_t n) {
  PentaBands b;
  b.n = n;
  b.diag.assign(n, 0.0);
  b.off1.assign(n >= 1 ? n - 1 : 0, 0.0);
  b.off2.assign(n >= 2 ? n - 2 : 0, 0.0);
  return b;
}

PentaLdlt::PentaLdlt(const PentaBands& a) { factor(a, true); }

PentaLdlt::PentaLdlt(const PentaBands& a, allow_indefinite_t) {
  factor(a, false);
}

void PentaLdlt::factor(const PentaBands& a, bool require_positive) {
  const std::size_t n = a.n;
  d_.assign(n, 0.0);
  l1_.assign(n >= 1 ? n - 1 : 0, 0.0);
  l2_.assign(n >= 2 ? n - 2 : 0, 0.0);

  for (std::size_t i = 0; i < n; ++i) {
    double d = a.diag[i];
    if (i >= 1) d -= l1_[i - 1] * l1_[i - 1] * d_[i - 1];
    if (i >= 2) d -= l2_[i - 2] * l2_[i - 2] * d_[i - 2];
    if (require_positive && !(d > 0.0))
      throw NotPositiveDefiniteError("banded LDL^T: nonpositive pivot at row " +
                                     std::to_string(i));
    if (d == 0.0 || !std::isfinite(d))
      throw NumericalError("banded LDL^T: singular leading minor at row " +
                           std::to_string(i));
    if (d < 0.0) ++negative_;
    d_[i] = d;
    if (i + 1 < n) {
      double v = a.off1[i];
      if (i >= 1) v -= l1_[i - 1] * l2_[i - 1] * d_[i - 1];
      l1_[i] = v / d;
    }
    if (i + 2 < n) l2_[i] = a.off2[i] / d;
  }
}

double PentaLdlt::log_det() const {
  double s = 0.0;
  for (double d : d_) s += std::log(d);
  return s;
}

double PentaLdlt::log_abs_det() const {
  double s = 0.0;
  for (double d : d_) s += std::log(std::abs(d));
  return s;
}

void PentaLdlt::solve_in_place(std::span<double> b) const {
  const std::size_t n = d_.size();
  // L z = b
  for (std::size_t i = 0; i < n; ++i) {
    if (i >= 1) b[i] -= l1_[i - 1] * b[i - 1];
    if (i >= 2) b[i] -= l2_[i - 2] * b[i - 2];
  }
  // D y = z
  for (std::size_t i = 0; i < n; ++i) b[i] /= d_[i];
  // L^T x = y
  for (std::size_t i = n; i-- > 0;) {
    if (i + 1 < n) b[i] -= l1_[i] * b[i + 1];
    if (i + 2 < n) b[i] -= l2_[i] * b[i + 2];
  }
}

std::vector<double> PentaLdlt::solve(std::span<const double> b) const {
  std::vector<double> x(b.begin(), b.end());
  solve_in_place(x);
  return x;
}

std::vector<double> PentaLdlt::half_inverse_apply(std::span<const double> z) const {
  if (negative_ > 0)
    throw NotPositiveDefiniteError(
        "cannot sample from an indefinite precision matrix");
  const std::size_t n = d_.size();
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = z[i] / std::sqrt(d_[i]);
  for (std::size_t i = n; i-- > 0;) {
    if (i + 1 < n) x[i] -= l1_[i] * x[i + 1];
    if (i + 2 < n) x[i] -= l2_[i] * x[i + 2];
  }
  return x;
}

}  // namespace spartan
