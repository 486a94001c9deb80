#include "ccs/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "ccs/errors.hpp"
#include "ccs/scattering.hpp"
#include "ccs/solver.hpp"
#include "ccs/sweep.hpp"

namespace ccs {

namespace fs = std::filesystem;

namespace {

// Output files are written next to their destination under a temporary
// name and renamed only once the whole command succeeded.
class OutputFiles {
 public:
  explicit OutputFiles(fs::path dir) : dir_(std::move(dir)) {}
  OutputFiles(const OutputFiles&) = delete;
  OutputFiles& operator=(const OutputFiles&) = delete;
  ~OutputFiles() {
    if (committed_) return;
    std::error_code ec;
    for (const auto& [tmp, final_path] : files_) fs::remove(tmp, ec);
  }

  /// Temporary path standing in for dir/name until commit().
  fs::path reserve(const std::string& name) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    const fs::path final_path = dir_ / name;
    fs::path tmp = final_path;
    tmp += ".partial";
    files_.emplace_back(tmp, final_path);
    return tmp;
  }

  std::ofstream open(const std::string& name) {
    const fs::path tmp = reserve(name);
    std::ofstream stream(tmp, std::ios::trunc);
    if (!stream) throw InputError("cannot write " + files_.back().second.string());
    return stream;
  }

  void commit() {
    for (const auto& [tmp, final_path] : files_) fs::rename(tmp, final_path);
    committed_ = true;
  }

 private:
  fs::path dir_;
  std::vector<std::pair<fs::path, fs::path>> files_;
  bool committed_ = false;
};

std::vector<double> requested_energies(const RunConfig& c) {
  const bool grid = c.emin || c.emax || c.estep;
  if (grid && !c.energies.empty()) throw InputError("give either --emin/--emax/--estep or --energies, not both");
  if (grid) {
    if (!(c.emin && c.emax && c.estep)) throw InputError("--emin, --emax and --estep must be given together");
    return energy_grid(*c.emin, *c.emax, *c.estep);
  }
  if (c.energies.empty()) throw InputError("no energies requested");
  if (!std::ranges::is_sorted(c.energies) || std::adjacent_find(c.energies.begin(), c.energies.end()) != c.energies.end())
    throw InputError("explicit energies must be strictly ascending");
  return c.energies;
}

double sweep_spacing(const RunConfig& c, const std::vector<double>& energies) {
  if (c.estep) return *c.estep;
  double spacing = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < energies.size(); ++k) spacing = std::min(spacing, energies[k] - energies[k - 1]);
  return std::isfinite(spacing) ? spacing : 1.0;
}

fs::path output_dir(const RunConfig& c) { return c.output_dir.empty() ? c.workdir : c.output_dir; }

SweepValidation validated(const RunConfig& c, const Problem& problem, const std::vector<double>& energies,
                          std::ostream& err) {
  const auto ctx = make_limits_context(problem.channels, problem.grid, problem.potential_range);
  auto sweep = valid_sweep(energies, ctx, c.factors);
  if (sweep.rejected() > 0 || std::ranges::any_of(sweep.reports, [](const EnergyReport& r) {
        return r.status() == LimitStatus::warn;
      })) {
    err << "energy limits:\n";
    print_report(err, sweep);
  }
  return sweep;
}

std::vector<SweepPoint> run_sweep(const RunConfig& c, const Problem& problem, const std::vector<double>& energies,
                                  std::ostream& err) {
  auto points = sweep_k_matrix(problem, energies, c.asymmetry_tolerance, c.workers);
  std::size_t ok = 0;
  for (const auto& p : points) {
    if (!p.result) {
      err << "warning: E = " << format_real(p.energy) << " skipped: " << p.error << '\n';
      continue;
    }
    ++ok;
    if (p.result->warned)
      err << "warning: K-matrix asymmetry " << p.result->asymmetry << " at E = " << format_real(p.energy)
          << " exceeds tolerance " << c.asymmetry_tolerance << '\n';
  }
  if (ok == 0) throw NumericalError("every requested energy failed");
  return points;
}

double scalar_k(const Eigen::MatrixXd& k) { return k.size() == 1 ? k(0, 0) : k.determinant(); }

int command_example(const RunConfig& c, std::ostream& out) {
  generate_example(c.workdir, c.example_step, c.example_radius);
  out << "wrote " << (c.workdir / "channels.csv").string() << " and " << (c.workdir / "potential.csv").string()
      << '\n';
  return kSuccess;
}

int command_bound(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto problem = load_problem(c.workdir, c.range_epsilon);
  BoundStateOptions opts;
  opts.count = c.bound_count;
  const auto states = solve_bound(problem.hamiltonian, problem.channels, problem.grid, opts);
  OutputFiles files(output_dir(c));
  for (double e : states.energies) out << format_real(e) << '\n';
  if (!states.complete())
    err << "note: found " << states.energies.size() << " of " << states.requested
        << " requested bound states below the lowest threshold\n";
  if (c.dump_wavefunctions && !states.energies.empty()) {
    write_wavefunctions(files.reserve("bound_wavefunctions.csv"), problem.grid, states.wavefunctions);
  }
  files.commit();
  return kSuccess;
}

int command_validate(const RunConfig& c, std::ostream& out) {
  const auto energies = requested_energies(c);
  const auto problem = load_problem(c.workdir, c.range_epsilon);
  const auto ctx = make_limits_context(problem.channels, problem.grid, problem.potential_range);
  SweepValidation sweep;
  for (double e : energies) {
    auto report = validate_energy(e, ctx, c.factors);
    if (report.status() != LimitStatus::fail) sweep.accepted.push_back(e);
    sweep.reports.push_back(std::move(report));
  }
  const auto window = energy_window(ctx, c.factors);
  out << "r_V = " << format_real(problem.potential_range) << ", R = " << format_real(ctx.radius)
      << ", d = " << format_real(ctx.step) << '\n';
  out << "global minimum E >= " << format_real(window.global_min) << ", Shannon bound E < "
      << format_real(window.shannon_max) << ", confining bound E < " << format_real(window.confining_max) << '\n';
  print_report(out, sweep, true);
  OutputFiles files(output_dir(c));
  auto csv = files.open("validation.csv");
  write_report_csv(csv, sweep);
  csv.close();
  files.commit();
  return sweep.rejected() == 0 ? kSuccess : kValidationError;
}

int command_kmatrix(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto requested = requested_energies(c);
  const auto problem = load_problem(c.workdir, c.range_epsilon);
  const auto sweep = validated(c, problem, requested, err);
  const auto points = run_sweep(c, problem, sweep.accepted, err);

  OutputFiles files(output_dir(c));
  auto csv = files.open("kmatrix.csv");
  std::size_t rows = 0;
  for (const auto& p : points)
    if (p.result) {
      csv << kmatrix_row(*p.result) << '\n';
      ++rows;
    }
  csv.close();
  if (c.dump_wavefunctions) {
    if (sweep.accepted.size() != 1) throw InputError("--dump needs exactly one energy");
    const auto u = solve_scattering_at(problem.hamiltonian, problem.channels, problem.grid, sweep.accepted.front());
    std::vector<std::vector<double>> cols;
    for (std::size_t j = 0; j < u.n_solutions(); ++j) cols.emplace_back(u.column(j).begin(), u.column(j).end());
    write_wavefunctions(files.reserve("wavefunctions.csv"), problem.grid, cols);
  }
  files.commit();
  out << "wrote " << rows << " rows to " << (output_dir(c) / "kmatrix.csv").string() << '\n';
  return kSuccess;
}

int command_amplitudes(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto requested = requested_energies(c);
  const auto problem = load_problem(c.workdir, c.range_epsilon);
  const auto sweep = validated(c, problem, requested, err);
  const auto points = run_sweep(c, problem, sweep.accepted, err);

  std::optional<std::vector<ChannelSpin>> spins;
  if (c.cross_sections) spins = problem.channels.spins();

  OutputFiles files(output_dir(c));
  auto amp = files.open("amp.csv");
  std::ofstream xsec;
  if (c.cross_sections) xsec = files.open("xsec.csv");
  std::size_t rows = 0;
  for (const auto& p : points) {
    if (!p.result) continue;
    amp << amplitude_row(*p.result, c.complex_amplitudes) << '\n';
    ++rows;
    if (c.cross_sections) {
      const auto& open = p.result->open_channels;
      std::vector<double> momenta;
      std::vector<ChannelSpin> open_spins;
      for (std::size_t i : open) {
        momenta.push_back(channel_momentum(problem.channels[i], p.energy));
        open_spins.push_back(spins ? (*spins)[i] : ChannelSpin{});
      }
      const auto sigma = cross_section(s_and_t(p.result->k), momenta, open_spins, c.total_j);
      xsec << format_real(p.energy);
      for (Eigen::Index i = 0; i < sigma.rows(); ++i)
        for (Eigen::Index j = 0; j < sigma.cols(); ++j) xsec << ',' << format_real(sigma(i, j));
      xsec << '\n';
    }
  }
  amp.close();
  if (xsec.is_open()) xsec.close();
  files.commit();
  out << "wrote " << rows << " rows to " << (output_dir(c) / "amp.csv").string() << '\n';
  return kSuccess;
}

int command_poles(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto requested = requested_energies(c);
  const auto problem = load_problem(c.workdir, c.range_epsilon);
  const auto sweep = validated(c, problem, requested, err);
  const auto points = run_sweep(c, problem, sweep.accepted, err);
  const double spacing = sweep_spacing(c, requested);
  const double axis_tol = c.axis_tol.value_or(2.0 * spacing);

  std::vector<double> fit_e;
  std::vector<Complex> fit_f;
  std::vector<double> est_e;
  std::vector<double> est_g;
  for (const auto& p : points) {
    est_e.push_back(p.energy);
    if (!p.result || p.result->k.cwiseAbs().maxCoeff() > c.max_k_magnitude) {
      est_g.push_back(std::numeric_limits<double>::infinity());
      continue;
    }
    est_g.push_back(scalar_k(p.result->k));
    fit_e.push_back(p.energy);
    fit_f.push_back(pole_function(p.result->k));
  }

  const auto fit = aaa_fit(fit_e, fit_f, c.aaa);
  if (!fit.converged)
    err << "warning: rational fit stopped at degree " << fit.degree() << " with max error "
        << format_real(fit.max_error) << " (tolerance not reached)\n";
  const auto pz = poles_and_zeros(fit);

  ScreeningOptions screening;
  screening.axis_tol = axis_tol;
  screening.residue_tol = c.residue_tol;
  screening.match_tol = spacing;
  screening.doublet_tol = c.doublet_tol.value_or(1e-2 * spacing);

  auto estimates = estimate_k_poles(est_e, est_g);
  auto screened = screen_poles(pz.poles, pz.zeros, estimates, screening);
  // Genuine poles inside the sweep without a sweep estimate get a local K scan.
  const double lo = sweep.accepted.front();
  const double hi = sweep.accepted.back();
  bool refined = false;
  for (const auto& pole : screened) {
    const double re = pole.position.real();
    if (pole.classification != PoleClass::genuine || pole.matched || re < lo || re > hi) continue;
    std::vector<double> local = energy_grid(re - spacing, re + spacing, spacing / 16.0);
    std::vector<double> g(local.size());
    const auto scan = sweep_k_matrix(problem, local, c.asymmetry_tolerance, c.workers);
    for (std::size_t k = 0; k < scan.size(); ++k)
      g[k] = scan[k].result ? scalar_k(scan[k].result->k) : std::numeric_limits<double>::infinity();
    for (double e : estimate_k_poles(local, g)) estimates.push_back(e);
    refined = true;
  }
  std::ranges::sort(estimates);
  if (refined) screened = screen_poles(pz.poles, pz.zeros, estimates, screening);

  ComplexDomain domain;
  domain.re_min = lo;
  domain.re_max = hi;
  domain.im_min = -(hi - lo);
  domain.im_max = 0.0;
  const double stability_tol = c.stability_tol.value_or(spacing);
  const auto candidates =
      stability_tol > 0.0 ? resampled_zeros(fit_e, fit_f, pz.zeros, stability_tol, c.aaa) : pz.zeros;
  auto report = find_resonances(candidates, screened, domain, axis_tol);
  report.zeros = pz.zeros;

  OutputFiles files(output_dir(c));
  {
    auto kcsv = files.open("kmatrix.csv");
    for (const auto& p : points)
      if (p.result) kcsv << kmatrix_row(*p.result) << '\n';
  }
  {
    auto pcsv = files.open("poles.csv");
    for (const auto& p : report.poles)
      pcsv << format_real(p.position.real()) << ',' << format_real(p.position.imag()) << ','
           << format_real(p.residue.real()) << ',' << format_real(p.residue.imag()) << ',' << label(p) << '\n';
  }
  {
    auto rcsv = files.open("resonances.csv");
    for (const auto& r : report.resonances) rcsv << format_real(r.mass) << ',' << format_real(r.width) << '\n';
  }
  files.commit();

  out << "rational fit: " << fit.support.size() << " support points, max error " << format_real(fit.max_error)
      << (fit.converged ? "" : " (not converged)") << '\n';
  out << "K-pole estimates from the real-energy sweep:";
  for (double e : estimates) out << ' ' << format_real(e);
  out << '\n';
  for (const auto& p : report.poles)
    if (p.classification == PoleClass::genuine && domain.re_min <= p.position.real() && p.position.real() <= domain.re_max)
      out << "pole " << format_real(p.position.real()) << (p.position.imag() < 0 ? " - " : " + ")
          << format_real(std::abs(p.position.imag())) << "i  [" << label(p) << "]\n";
  for (const auto& r : report.resonances)
    out << "resonance M = " << format_real(r.mass) << ", Gamma = " << format_real(r.width) << '\n';
  if (report.resonances.empty()) out << "no resonance found in the lower half-plane\n";
  return kSuccess;
}

}  // namespace

std::array<double, 4> showcase_potential(double r) {
  const double x = 100.0 * r;
  const double envelope = std::exp(-x * x);
  const double v11 = (0.05 / r - 100.0) * envelope;
  const double v12 = 50.0 * x * x * envelope;
  return {v11, v12, v12, v11 + 100.0};
}

void generate_example(const fs::path& workdir, double step, double radius) {
  if (!(step > 0.0) || !(radius > 0.0)) throw InputError("example: step and radius must be positive");
  const auto intervals = static_cast<std::size_t>(std::llround(radius / step));
  if (intervals < 4) throw InputError("example: radius must span at least 4 steps");
  std::error_code ec;
  fs::create_directories(workdir, ec);

  ChannelTable table;
  table.channels.push_back({1, 1000.0, 0.0, {}});
  table.channels.push_back({0, 1000.0, 100.0, {}});

  const std::size_t m = intervals - 1;
  std::vector<double> nodes(m);
  std::vector<double> values(m * 4);
  for (std::size_t n = 0; n < m; ++n) {
    const double r = static_cast<double>(n + 1) * step;
    nodes[n] = r;
    const auto v = showcase_potential(r);
    std::copy(v.begin(), v.end(), values.begin() + static_cast<std::ptrdiff_t>(4 * n));
  }
  const PotentialGrid grid(std::move(nodes), 2, std::move(values));
  write_channels(workdir / "channels.csv", table);
  write_potential(workdir / "potential.csv", grid);
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    switch (config.command) {
      case Command::example: return command_example(config, out);
      case Command::bound: return command_bound(config, out, err);
      case Command::validate: return command_validate(config, out);
      case Command::kmatrix: return command_kmatrix(config, out, err);
      case Command::amplitudes: return command_amplitudes(config, out, err);
      case Command::poles: return command_poles(config, out, err);
    }
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << '\n';
    return kValidationError;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

}  // namespace ccs
