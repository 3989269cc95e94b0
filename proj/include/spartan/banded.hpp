#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace spartan {

// Symmetric pentadiagonal matrix in band storage: main diagonal plus the
// first and second superdiagonals. Subdiagonals are implied by symmetry.
struct PentaBands {
  std::size_t n = 0;
  std::vector<double> diag;  // n entries, A[i][i]
  std::vector<double> off1;  // n-1 entries, A[i][i+1]
  std::vector<double> off2;  // n-2 entries, A[i][i+2]
};

PentaBands make_penta(std::size_t n);

// Entry A[i][j], zero outside the band.
inline double band_entry(const PentaBands& a, std::size_t i, std::size_t j) {
  const std::size_t lo = i < j ? i : j;
  const std::size_t k = (i < j ? j : i) - lo;
  if (k == 0) return a.diag[lo];
  if (k == 1) return a.off1[lo];
  if (k == 2) return a.off2[lo];
  return 0.0;
}

// LDL^T factorization of a symmetric pentadiagonal matrix, O(n) time and
// storage, no pivoting.
//
// The strict constructor requires positive definiteness and throws
// NotPositiveDefiniteError at the first nonpositive pivot. The tolerant
// constructor factorizes through negative pivots and records the inertia
// (by Sylvester's law the negative pivot count equals the number of negative
// eigenvalues); it only rejects an exactly singular leading minor. The
// tolerant form exists because the model's precision matrix on a finite
// free-boundary grid acquires two edge-localized negative modes for strongly
// negative shape coefficients while remaining perfectly invertible.
class PentaLdlt {
public:
  struct allow_indefinite_t {};
  static constexpr allow_indefinite_t allow_indefinite{};

  explicit PentaLdlt(const PentaBands& a);
  PentaLdlt(const PentaBands& a, allow_indefinite_t);

  // Sum of log pivots; meaningful for positive definite factorizations.
  double log_det() const;
  // log |det A|, defined for any nonsingular factorization.
  double log_abs_det() const;
  int negative_pivots() const noexcept { return negative_; }

  // Solve A x = b in place.
  void solve_in_place(std::span<double> b) const;
  std::vector<double> solve(std::span<const double> b) const;

  // x = L^{-T} D^{-1/2} z, so that cov(x) = A^{-1} for z ~ N(0, I).
  // Used to draw exact samples of a process specified by its precision;
  // requires a positive definite factorization.
  [[nodiscard]] std::vector<double> half_inverse_apply(
      std::span<const double> z) const;

  std::size_t size() const noexcept { return d_.size(); }

private:
  void factor(const PentaBands& a, bool require_positive);

  std::vector<double> d_;   // pivots
  std::vector<double> l1_;  // L[i+1][i]
  std::vector<double> l2_;  // L[i+2][i]
  int negative_ = 0;
};

}  // namespace spartan
