#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "ccs/banded_lu.hpp"
#include "ccs/hamiltonian.hpp"
#include "ccs/io_model.hpp"

namespace ccs {

/// Solutions of A u = B at one energy: column j is driven by unit boundary
/// value in open channel open_channels[j].
class WavefunctionSet {
 public:
  WavefunctionSet(double energy, std::size_t n_channels, std::size_t n_nodes, double step,
                  std::vector<std::size_t> open_channels, std::vector<double> data);

  double energy() const { return energy_; }
  std::size_t n_channels() const { return n_channels_; }
  std::size_t n_nodes() const { return n_nodes_; }
  std::size_t n_solutions() const { return open_.size(); }
  double step() const { return step_; }
  double radius() const { return step_ * static_cast<double>(n_nodes_ + 1); }
  const std::vector<std::size_t>& open_channels() const { return open_; }

  /// Channel i of solution j at 0-based node n (radius (n+1) d).
  double operator()(std::size_t i, std::size_t j, std::size_t n) const {
    return data_[j * n_channels_ * n_nodes_ + i + n_channels_ * n];
  }
  /// Value at r = R imposed by the boundary condition.
  double boundary_value(std::size_t i, std::size_t j) const { return open_[j] == i ? 1.0 : 0.0; }
  std::span<const double> column(std::size_t j) const {
    return {data_.data() + j * n_channels_ * n_nodes_, n_channels_ * n_nodes_};
  }

 private:
  double energy_;
  std::size_t n_channels_;
  std::size_t n_nodes_;
  double step_;
  std::vector<std::size_t> open_;
  std::vector<double> data_;
};

/// One factorization of A, all boundary columns solved against it.
WavefunctionSet solve_scattering(const BandedMatrix& a, const BoundaryMatrix& b, double energy,
                                 const PotentialGrid& grid);

/// Same, factoring H - E I directly without materializing the shifted copy.
WavefunctionSet solve_scattering_at(const BandedMatrix& h, const ChannelTable& channels,
                                    const PotentialGrid& grid, double energy);

/// max_col ||A u_col - B_col||_inf / ||B_col||_inf.
double scattering_residual(const BandedMatrix& a, const BoundaryMatrix& b, const WavefunctionSet& u);

struct BoundStateOptions {
  std::size_t count = 1;
  double tolerance = 1e-10;
  std::size_t max_iterations = 10000;
  /// Extra block vectors beyond `count` carried by the subspace iteration.
  std::size_t guard_vectors = 4;
};

struct BoundStateSet {
  /// Ascending, all below the lowest finite threshold.
  std::vector<double> energies;
  /// Column k: state k, flat index i + N n, normalized to d sum u^2 = 1.
  std::vector<std::vector<double>> wavefunctions;
  std::vector<double> residuals;  // ||H v - E v||_inf per state
  std::size_t requested = 0;
  std::size_t iterations = 0;
  double shift = 0.0;
  bool complete() const { return energies.size() >= requested; }
};

/// Lower bound on the spectrum of H: the kinetic part is positive
/// semidefinite, so min_n lambda_min(V(r_n) + centrifugal) bounds it below.
double spectrum_lower_bound(const ChannelTable& channels, const PotentialGrid& grid);

/// Lowest eigenpairs of H below the lowest finite threshold, by
/// shift-invert subspace iteration on the banded LU of H - sigma I with
/// sigma under the spectrum. Requires a symmetric potential.
BoundStateSet solve_bound(const BandedMatrix& h, const ChannelTable& channels, const PotentialGrid& grid,
                          const BoundStateOptions& options = {});

/// CSV: r, then u_{i,j} for channel i, solution j, ordered (1,1), (1,2), ..., (N,O).
void write_wavefunctions(const std::filesystem::path& path, const PotentialGrid& grid,
                         std::span<const std::vector<double>> columns);

}  // namespace ccs
