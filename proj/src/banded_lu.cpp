#include "ccs/banded_lu.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ccs/errors.hpp"

namespace ccs {

BandedLU::BandedLU(const BandedMatrix& a, double shift)
    : dim_(a.dim()),
      kl_(a.bandwidth()),
      kv_(2 * a.bandwidth()),
      ld_(3 * a.bandwidth() + 1),
      ab_(ld_ * a.dim(), 0.0),
      pivots_(a.dim()) {
  const std::size_t n = dim_;
  const std::size_t k = kl_;
  double scale = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t lo = j > k ? j - k : 0;
    const std::size_t hi = std::min(n - 1, j + k);
    for (std::size_t i = lo; i <= hi; ++i) {
      double v = a.at(i, j);
      if (i == j) v -= shift;
      elem(i, j) = v;
      scale = std::max(scale, std::abs(v));
    }
  }
  const double tiny = kPivotTolerance * scale;

  // Unblocked gbtf2: ju tracks the last column touched by row interchanges.
  std::size_t ju = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t km = std::min(kl_, n - 1 - j);
    std::size_t jp = 0;
    double best = std::abs(elem(j, j));
    for (std::size_t t = 1; t <= km; ++t) {
      const double v = std::abs(elem(j + t, j));
      if (v > best) {
        best = v;
        jp = t;
      }
    }
    pivots_[j] = j + jp;
    if (!(best > tiny)) {
      std::ostringstream msg;
      msg << "box eigenvalue collision: singular banded system (pivot " << best << " at row " << j
          << "); the energy coincides with an eigenvalue of the truncated box, perturb E";
      throw NumericalError(msg.str());
    }
    ju = std::max(ju, std::min(j + kl_ + jp, n - 1));  // ku == kl here
    if (jp != 0)
      for (std::size_t c = j; c <= ju; ++c) std::swap(elem(j, c), elem(j + jp, c));
    if (km > 0) {
      const double inv = 1.0 / elem(j, j);
      double* col = &elem(j + 1, j);
      for (std::size_t t = 0; t < km; ++t) col[t] *= inv;
      for (std::size_t c = j + 1; c <= ju; ++c) {
        const double pivot_row = elem(j, c);
        if (pivot_row == 0.0) continue;
        double* target = &elem(j + 1, c);
        for (std::size_t t = 0; t < km; ++t) target[t] -= col[t] * pivot_row;
      }
    }
  }
}

void BandedLU::solve(std::span<double> b) const {
  const std::size_t n = dim_;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const std::size_t lm = std::min(kl_, n - 1 - j);
    const std::size_t p = pivots_[j];
    if (p != j) std::swap(b[p], b[j]);
    const double bj = b[j];
    if (bj == 0.0) continue;
    const double* col = &elem(j + 1, j);
    for (std::size_t t = 0; t < lm; ++t) b[j + 1 + t] -= col[t] * bj;
  }
  for (std::size_t j = n; j-- > 0;) {
    b[j] /= elem(j, j);
    const double bj = b[j];
    if (bj == 0.0) continue;
    const std::size_t lo = j > kv_ ? j - kv_ : 0;
    for (std::size_t i = lo; i < j; ++i) b[i] -= elem(i, j) * bj;
  }
}

std::vector<double> BandedLU::solve_copy(std::span<const double> b) const {
  std::vector<double> x(b.begin(), b.end());
  solve(x);
  return x;
}

}  // namespace ccs
