#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ccs/io_model.hpp"

namespace ccs {

/// Square matrix with half-bandwidth `bandwidth` stored in diagonal-ordered
/// form: 2*bandwidth+1 rows of length dim, row g holding the diagonal with
/// offset (column - row) = bandwidth - g. Element (a, b) lives at
/// row (bandwidth + a - b), column b; entries falling outside the matrix
/// are zero padding. The top row is the outermost superdiagonal.
class BandedMatrix {
 public:
  BandedMatrix() = default;
  BandedMatrix(std::size_t dim, std::size_t bandwidth);

  std::size_t dim() const { return dim_; }
  std::size_t bandwidth() const { return bandwidth_; }
  std::size_t n_diagonals() const { return 2 * bandwidth_ + 1; }

  /// Stored value for |a - b| <= bandwidth.
  double& at(std::size_t a, std::size_t b) { return data_[(bandwidth_ + a - b) * dim_ + b]; }
  double at(std::size_t a, std::size_t b) const { return data_[(bandwidth_ + a - b) * dim_ + b]; }
  /// Any (a, b); zero outside the band.
  double value(std::size_t a, std::size_t b) const;

  std::span<double> row(std::size_t g) { return {data_.data() + g * dim_, dim_}; }
  std::span<const double> row(std::size_t g) const { return {data_.data() + g * dim_, dim_}; }
  std::span<const double> data() const { return data_; }

  std::size_t footprint_bytes() const { return data_.capacity() * sizeof(double); }

  /// y = A x.
  void multiply(std::span<const double> x, std::span<double> y) const;
  double max_abs() const;
  /// Max absolute row sum.
  double norm_inf() const;

  Eigen::MatrixXd to_dense() const;

 private:
  std::size_t dim_ = 0;
  std::size_t bandwidth_ = 0;
  std::vector<double> data_;
};

/// Flattened position of channel i at 0-based node n: i + N n.
inline std::size_t flat_index(std::size_t i, std::size_t n, std::size_t n_channels) {
  return i + n_channels * n;
}

/// Finite-difference Hamiltonian with Dirichlet ends, half-bandwidth N.
BandedMatrix assemble(const ChannelTable& channels, const PotentialGrid& grid);

/// Copy of h with energy subtracted from the main diagonal.
BandedMatrix shift(const BandedMatrix& h, double energy);

/// Right-hand sides for the scattering solve: one column per open channel
/// (T_i <= E, input order), nonzero only at the last node of that channel.
class BoundaryMatrix {
 public:
  struct Entry {
    std::size_t row;
    double value;
  };

  BoundaryMatrix(std::size_t dim, std::vector<std::size_t> open_channels, std::vector<Entry> entries);

  std::size_t rows() const { return dim_; }
  std::size_t cols() const { return open_.size(); }
  const std::vector<std::size_t>& open_channels() const { return open_; }
  /// The single nonzero of column j.
  const Entry& entry(std::size_t j) const { return entries_[j]; }
  std::vector<double> column(std::size_t j) const;

 private:
  std::size_t dim_;
  std::vector<std::size_t> open_;
  std::vector<Entry> entries_;
};

/// Open channels at energy E (T_i <= E), in input order.
std::vector<std::size_t> open_channels(const ChannelTable& channels, double energy);

/// Throws NumericalError when no channel is open (bound-state regime).
BoundaryMatrix boundary_rhs(const ChannelTable& channels, double energy, double step, std::size_t n_nodes);

}  // namespace ccs
