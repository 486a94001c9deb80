#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ccs/cli.hpp"

namespace {

void add_energies(CLI::App* cmd, ccs::RunConfig& c) {
  cmd->add_option("--emin", c.emin, "Lowest energy of the grid");
  cmd->add_option("--emax", c.emax, "Highest energy of the grid");
  cmd->add_option("--estep", c.estep, "Grid spacing")->check(CLI::PositiveNumber);
  cmd->add_option("--energies", c.energies, "Explicit ascending energy list")->delimiter(',');
  cmd->add_option("--epsilon", c.range_epsilon, "Threshold deviation defining the potential range (default: 1e-8 of the largest)");
  cmd->add_option("--strict-factor", c.factors.strict, "Ratio needed to pass a >> condition")->check(CLI::PositiveNumber);
  cmd->add_option("--soft-factor", c.factors.soft, "Ratio below which a >> condition fails")->check(CLI::PositiveNumber);
}

void add_sweep(CLI::App* cmd, ccs::RunConfig& c) {
  add_energies(cmd, c);
  cmd->add_option("--asym-tol", c.asymmetry_tolerance, "K-matrix asymmetry warning tolerance");
  cmd->add_option("--workers", c.workers, "Worker threads (0: all cores)");
}

}  // namespace

int main(int argc, char** argv) {
  ccs::RunConfig c;
  CLI::App app{"Coupled-channel scattering on a finite-difference radial grid"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--dir", c.workdir, "Directory holding channels.csv and potential.csv");
  app.add_option("--out", c.output_dir, "Output directory (default: --dir)");

  auto* bound = app.add_subcommand("bound", "Bound-state energies below the lowest threshold");
  bound->add_option("-k,--count", c.bound_count, "Number of states")->check(CLI::PositiveNumber);
  bound->add_flag("--dump", c.dump_wavefunctions, "Write bound_wavefunctions.csv");
  bound->add_option("--epsilon", c.range_epsilon, "Threshold deviation defining the potential range");

  auto* kmatrix = app.add_subcommand("kmatrix", "K-matrix sweep to kmatrix.csv");
  add_sweep(kmatrix, c);
  kmatrix->add_flag("--dump", c.dump_wavefunctions, "Write wavefunctions.csv (single energy only)");

  auto* amplitudes = app.add_subcommand("amplitudes", "|T|^2 sweep to amp.csv");
  add_sweep(amplitudes, c);
  amplitudes->add_flag("--complex", c.complex_amplitudes, "Append Re/Im T columns");
  amplitudes->add_flag("--xsec", c.cross_sections, "Also write xsec.csv");
  amplitudes->add_option("--J", c.total_j, "Total angular momentum for cross sections")->check(CLI::NonNegativeNumber);

  auto* poles = app.add_subcommand("poles", "Rational continuation, poles and resonances");
  add_sweep(poles, c);
  poles->add_option("--aaa-tol", c.aaa.tolerance, "Relative fit tolerance")->check(CLI::PositiveNumber);
  poles->add_option("--aaa-max-degree", c.aaa.max_degree, "Largest rational degree")->check(CLI::PositiveNumber);
  poles->add_option("--axis-tol", c.axis_tol, "Distance from the real axis for pole screening (default: 2 x spacing)");
  poles->add_option("--residue-tol", c.residue_tol, "Relative residue below which a pole is spurious");
  poles->add_option("--doublet-tol", c.doublet_tol, "Pole-zero distance marking a spurious doublet (default: 0.01 x spacing)");
  poles->add_option("--stability-tol", c.stability_tol,
                    "Distance within which fits to each half of the samples must reproduce a resonance (default: spacing, <= 0 disables)");
  poles->add_option("--max-k", c.max_k_magnitude, "Samples with larger |K| entries are left out of the fit");

  auto* validate = app.add_subcommand("validate", "Check energies against the grid limits");
  add_energies(validate, c);

  auto* example = app.add_subcommand("example", "Write the two-channel demonstration input");
  example->add_option("--step", c.example_step, "Grid step")->check(CLI::PositiveNumber);
  example->add_option("--radius", c.example_radius, "Box radius")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ccs::kInputError;
  }

  if (*bound) c.command = ccs::Command::bound;
  else if (*kmatrix) c.command = ccs::Command::kmatrix;
  else if (*amplitudes) c.command = ccs::Command::amplitudes;
  else if (*poles) c.command = ccs::Command::poles;
  else if (*validate) c.command = ccs::Command::validate;
  else c.command = ccs::Command::example;

  return ccs::run(c, std::cout, std::cerr);
}
