#include "ccs/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

#include "ccs/errors.hpp"
#include "ccs/scattering.hpp"
#include "ccs/solver.hpp"

namespace ccs {

Problem make_problem(ChannelTable channels, PotentialGrid grid, double epsilon) {
  if (channels.size() != grid.n_channels()) throw InputError("channel table and potential disagree on N");
  if (grid.n_nodes() < 3) throw InputError("potential grid needs at least 3 nodes");
  Problem p;
  p.range_epsilon = epsilon > 0.0 ? epsilon : default_range_epsilon(grid, channels);
  p.potential_range = numerical_range(grid, channels, p.range_epsilon);
  p.hamiltonian = assemble(channels, grid);
  p.channels = std::move(channels);
  p.grid = std::move(grid);
  return p;
}

Problem load_problem(const std::filesystem::path& workdir, double epsilon) {
  auto channels = load_channels(workdir / "channels.csv");
  auto grid = load_potential(workdir / "potential.csv", channels.size());
  return make_problem(std::move(channels), std::move(grid), epsilon);
}

KMatrixResult compute_k_matrix(const Problem& problem, double energy, double asymmetry_tolerance) {
  const auto u = solve_scattering_at(problem.hamiltonian, problem.channels, problem.grid, energy);
  const auto xy = extract_xy(u, problem.channels);
  auto k = k_matrix(xy.x, xy.y, asymmetry_tolerance);
  k.energy = energy;
  k.open_channels = xy.open_channels;
  return k;
}

void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& body) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(count, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          const std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<SweepPoint> sweep_k_matrix(const Problem& problem, std::span<const double> energies,
                                       double asymmetry_tolerance, std::size_t workers) {
  std::vector<SweepPoint> points(energies.size());
  parallel_for(energies.size(), workers, [&](std::size_t idx) {
    auto& pt = points[idx];
    pt.energy = energies[idx];
    try {
      pt.result = compute_k_matrix(problem, pt.energy, asymmetry_tolerance);
    } catch (const NumericalError& e) {
      pt.error = e.what();
    }
  });
  return points;
}

std::vector<double> energy_grid(double emin, double emax, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw InputError("energy step must be positive");
  if (!(emax >= emin)) throw InputError("energy grid: emax must not be below emin");
  const auto count = static_cast<std::size_t>(std::floor((emax - emin) / step + 1e-9)) + 1;
  std::vector<double> grid(count);
  for (std::size_t k = 0; k < count; ++k) grid[k] = emin + static_cast<double>(k) * step;
  return grid;
}

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.11e", v);
  return buf;
}

std::string kmatrix_row(const KMatrixResult& k) {
  std::string row = format_real(k.energy);
  for (Eigen::Index i = 0; i < k.k.rows(); ++i)
    for (Eigen::Index j = 0; j < k.k.cols(); ++j) row += "," + format_real(k.k(i, j));
  return row;
}

std::string amplitude_row(const KMatrixResult& k, bool with_complex) {
  const auto mats = s_and_t(k.k);
  std::string row = format_real(k.energy);
  for (Eigen::Index i = 0; i < mats.t.rows(); ++i)
    for (Eigen::Index j = 0; j < mats.t.cols(); ++j) row += "," + format_real(std::norm(mats.t(i, j)));
  if (with_complex)
    for (Eigen::Index i = 0; i < mats.t.rows(); ++i)
      for (Eigen::Index j = 0; j < mats.t.cols(); ++j)
        row += "," + format_real(mats.t(i, j).real()) + "," + format_real(mats.t(i, j).imag());
  return row;
}

}  // namespace ccs
