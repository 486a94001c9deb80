#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ccs/hamiltonian.hpp"

namespace ccs {

/// LU factorization with partial pivoting of a banded matrix (optionally
/// shifted by -shift on the diagonal), in the column-major band layout of
/// LAPACK's gbtrf: row interchanges push fill into `bandwidth` extra
/// superdiagonals, so each column keeps 3*bandwidth+1 entries.
class BandedLU {
 public:
  /// Pivots with |u_jj| < kPivotTolerance * max|A| are treated as singular.
  static constexpr double kPivotTolerance = 1e-14;

  /// Throws NumericalError on a (numerically) singular matrix.
  explicit BandedLU(const BandedMatrix& a, double shift = 0.0);

  std::size_t dim() const { return dim_; }

  /// In-place solve of A x = b.
  void solve(std::span<double> b) const;
  std::vector<double> solve_copy(std::span<const double> b) const;

  std::size_t footprint_bytes() const { return ab_.capacity() * sizeof(double) + pivots_.capacity() * sizeof(std::size_t); }

 private:
  double& elem(std::size_t i, std::size_t j) { return ab_[j * ld_ + kv_ + i - j]; }
  const double& elem(std::size_t i, std::size_t j) const { return ab_[j * ld_ + kv_ + i - j]; }

  std::size_t dim_;
  std::size_t kl_;
  std::size_t kv_;  // kl + ku, upper bandwidth of U
  std::size_t ld_;  // 2 kl + ku + 1
  std::vector<double> ab_;
  std::vector<std::size_t> pivots_;
};

}  // namespace ccs
