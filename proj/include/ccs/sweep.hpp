#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ccs/asymptotics.hpp"
#include "ccs/hamiltonian.hpp"
#include "ccs/io_model.hpp"

namespace ccs {

/// Loaded inputs plus the assembled Hamiltonian; read-only once built, so
/// sweep workers share one instance.
struct Problem {
  ChannelTable channels;
  PotentialGrid grid;
  BandedMatrix hamiltonian;
  double potential_range = 0.0;
  double range_epsilon = 0.0;
};

/// epsilon <= 0 selects default_range_epsilon.
Problem make_problem(ChannelTable channels, PotentialGrid grid, double epsilon = 0.0);
/// Reads channels.csv and potential.csv from `workdir`.
Problem load_problem(const std::filesystem::path& workdir, double epsilon = 0.0);

/// Full single-energy pipeline: solve, project, form K.
KMatrixResult compute_k_matrix(const Problem& problem, double energy,
                               double asymmetry_tolerance = kDefaultAsymmetryTolerance);

struct SweepPoint {
  double energy = 0.0;
  std::optional<KMatrixResult> result;
  std::string error;  // set when the energy failed numerically
};

/// Energies are processed independently on `workers` threads (0 = all
/// cores); output order follows the input order.
std::vector<SweepPoint> sweep_k_matrix(const Problem& problem, std::span<const double> energies,
                                       double asymmetry_tolerance = kDefaultAsymmetryTolerance,
                                       std::size_t workers = 0);

/// Runs body(index) for index in [0, count) on a pool of threads.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& body);

/// emin, emin + step, ... up to emax (inclusive within 1e-9 of a step).
std::vector<double> energy_grid(double emin, double emax, double step);

/// Scientific notation, 12 significant digits.
std::string format_real(double v);

/// `E, K_11, K_12, ..., K_OO` (row-major).
std::string kmatrix_row(const KMatrixResult& k);
/// `E, |T_11|^2, ..., |T_OO|^2`, optionally followed by Re T_ij, Im T_ij pairs.
std::string amplitude_row(const KMatrixResult& k, bool with_complex);

}  // namespace ccs
