#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "ccs/limits.hpp"
#include "ccs/rational.hpp"

namespace ccs {

enum class Command { bound, kmatrix, amplitudes, poles, validate, example };

/// Process exit codes.
enum ExitCode : int { kSuccess = 0, kInputError = 1, kNumericalError = 2, kValidationError = 3 };

struct RunConfig {
  Command command = Command::kmatrix;
  std::filesystem::path workdir = ".";
  /// Where output CSVs go; empty means workdir.
  std::filesystem::path output_dir;

  // Energies: either the grid (all three set) or the explicit list.
  std::optional<double> emin;
  std::optional<double> emax;
  std::optional<double> estep;
  std::vector<double> energies;

  double asymmetry_tolerance = 0.01;
  double range_epsilon = 0.0;  // <= 0: default
  LimitFactors factors;

  AaaOptions aaa;
  std::optional<double> axis_tol;  // default 2x sweep spacing
  double residue_tol = 1e-6;
  std::optional<double> doublet_tol;  // default 0.01x sweep spacing
  /// Resonances must reappear within this distance in fits to each half of
  /// the samples; default the sweep spacing, <= 0 disables.
  std::optional<double> stability_tol;
  /// Samples with any |K_ij| above this are left out of the fit.
  double max_k_magnitude = 1e8;

  double total_j = 0.0;
  bool cross_sections = false;
  bool complex_amplitudes = false;

  std::size_t workers = 0;  // 0: all cores

  std::size_t bound_count = 1;
  bool dump_wavefunctions = false;

  double example_step = 1e-6;
  double example_radius = 1.0;
};

/// Runs one command; diagnostics go to err, summaries to out. Returns an
/// ExitCode. Output files of a failed run are removed.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Two-channel demonstration potential matrix at radius r (row-major 2x2).
std::array<double, 4> showcase_potential(double r);

/// Writes channels.csv and potential.csv for the two-channel demonstration
/// on the nodes d, 2d, ..., R - d.
void generate_example(const std::filesystem::path& workdir, double step = 1e-6, double radius = 1.0);

}  // namespace ccs
