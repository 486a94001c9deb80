#include "ccs/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "ccs/errors.hpp"

namespace ccs {

WavefunctionSet::WavefunctionSet(double energy, std::size_t n_channels, std::size_t n_nodes, double step,
                                 std::vector<std::size_t> open_channels, std::vector<double> data)
    : energy_(energy),
      n_channels_(n_channels),
      n_nodes_(n_nodes),
      step_(step),
      open_(std::move(open_channels)),
      data_(std::move(data)) {}

namespace {

WavefunctionSet solve_with(const BandedLU& lu, const BoundaryMatrix& b, double energy, const PotentialGrid& grid) {
  const std::size_t dim = b.rows();
  std::vector<double> data(dim * b.cols(), 0.0);
  for (std::size_t j = 0; j < b.cols(); ++j) {
    std::span<double> col(data.data() + j * dim, dim);
    col[b.entry(j).row] = b.entry(j).value;
    lu.solve(col);
  }
  return WavefunctionSet(energy, grid.n_channels(), grid.n_nodes(), grid.step(), b.open_channels(), std::move(data));
}

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * y[k];
  return s;
}

// Modified Gram-Schmidt, applied twice; columns keep their order.
void orthonormalize(std::vector<std::vector<double>>& block) {
  for (std::size_t c = 0; c < block.size(); ++c) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t p = 0; p < c; ++p) {
        const double proj = dot(block[p], block[c]);
        for (std::size_t k = 0; k < block[c].size(); ++k) block[c][k] -= proj * block[p][k];
      }
    }
    const double norm = std::sqrt(dot(block[c], block[c]));
    if (!(norm > 0.0)) throw NumericalError("bound-state iteration: subspace collapsed");
    for (double& v : block[c]) v /= norm;
  }
}

void require_symmetric(const PotentialGrid& grid) {
  const std::size_t nc = grid.n_channels();
  for (std::size_t n = 0; n < grid.n_nodes(); ++n)
    for (std::size_t i = 0; i < nc; ++i)
      for (std::size_t j = i + 1; j < nc; ++j) {
        const double a = grid(n, i, j);
        const double b = grid(n, j, i);
        if (std::abs(a - b) > 1e-12 * std::max(std::abs(a), std::abs(b)))
          throw InputError("bound-state solver requires a symmetric potential; V_" + std::to_string(i + 1) +
                           std::to_string(j + 1) + " != V_" + std::to_string(j + 1) + std::to_string(i + 1) +
                           " at node " + std::to_string(n + 1));
      }
}

}  // namespace

WavefunctionSet solve_scattering(const BandedMatrix& a, const BoundaryMatrix& b, double energy,
                                 const PotentialGrid& grid) {
  if (a.dim() != b.rows()) throw InputError("solve_scattering: dimension mismatch");
  const BandedLU lu(a);
  return solve_with(lu, b, energy, grid);
}

WavefunctionSet solve_scattering_at(const BandedMatrix& h, const ChannelTable& channels, const PotentialGrid& grid,
                                    double energy) {
  const auto b = boundary_rhs(channels, energy, grid.step(), grid.n_nodes());
  const BandedLU lu(h, energy);
  return solve_with(lu, b, energy, grid);
}

double scattering_residual(const BandedMatrix& a, const BoundaryMatrix& b, const WavefunctionSet& u) {
  double worst = 0.0;
  std::vector<double> au(a.dim());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    a.multiply(u.column(j), au);
    au[b.entry(j).row] -= b.entry(j).value;
    double r = 0.0;
    for (double v : au) r = std::max(r, std::abs(v));
    worst = std::max(worst, r / std::abs(b.entry(j).value));
  }
  return worst;
}

double spectrum_lower_bound(const ChannelTable& channels, const PotentialGrid& grid) {
  // Gershgorin discs of V(r_n) + centrifugal, node by node.
  const std::size_t nc = channels.size();
  double bound = std::numeric_limits<double>::infinity();
  const auto nodes = grid.nodes();
  for (std::size_t n = 0; n < grid.n_nodes(); ++n) {
    const double r = nodes[n];
    for (std::size_t i = 0; i < nc; ++i) {
      const auto& ch = channels[i];
      double centre = grid(n, i, i) + static_cast<double>(ch.l * (ch.l + 1)) / (2.0 * ch.mu * r * r);
      double radius = 0.0;
      for (std::size_t j = 0; j < nc; ++j)
        if (j != i) radius += std::abs(grid(n, i, j));
      bound = std::min(bound, centre - radius);
    }
  }
  return bound;
}

BoundStateSet solve_bound(const BandedMatrix& h, const ChannelTable& channels, const PotentialGrid& grid,
                          const BoundStateOptions& options) {
  if (options.count == 0) throw InputError("solve_bound: requested state count must be >= 1");
  require_symmetric(grid);

  const std::size_t dim = h.dim();
  const std::size_t block = std::min(dim, options.count + options.guard_vectors);
  const std::size_t wanted = std::min(options.count, block);
  const double ceiling = channels.min_finite_threshold();
  const double sigma = spectrum_lower_bound(channels, grid) - 1.0;
  const BandedLU lu(h, sigma);

  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  std::vector<std::vector<double>> v(block, std::vector<double>(dim));
  for (auto& col : v)
    for (double& x : col) x = uniform(rng);
  orthonormalize(v);

  std::vector<std::vector<double>> y(block, std::vector<double>(dim));
  std::vector<double> theta(block, std::numeric_limits<double>::infinity());
  std::size_t iter = 0;
  bool converged = false;
  while (iter < options.max_iterations && !converged) {
    ++iter;
    for (std::size_t c = 0; c < block; ++c) {
      y[c] = v[c];
      lu.solve(y[c]);
    }
    // Rayleigh-Ritz for (H - sigma)^-1 on span(v); its largest eigenvalues
    // are the lowest energies, and 1/mu carries no cancellation error.
    Eigen::MatrixXd g(block, block);
    for (std::size_t p = 0; p < block; ++p)
      for (std::size_t q = p; q < block; ++q) g(p, q) = g(q, p) = 0.5 * (dot(v[p], y[q]) + dot(v[q], y[p]));
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g);
    std::vector<double> next_theta(block);
    for (std::size_t c = 0; c < block; ++c) {
      const double mu = eig.eigenvalues()(static_cast<Eigen::Index>(block - 1 - c));
      next_theta[c] = mu > 0.0 ? sigma + 1.0 / mu : std::numeric_limits<double>::infinity();
    }

    converged = true;
    for (std::size_t c = 0; c < wanted; ++c) {
      const double change = std::abs(next_theta[c] - theta[c]);
      const double scale = std::max(1.0, std::abs(next_theta[c]));
      // Above the threshold only the classification matters.
      const double tol = next_theta[c] < ceiling ? options.tolerance : 1e-6;
      if (!(change <= tol * scale)) converged = false;
    }
    theta = next_theta;

    // v <- orth(Y Q), columns in ascending energy order.
    std::vector<std::vector<double>> rotated(block, std::vector<double>(dim, 0.0));
    for (std::size_t c = 0; c < block; ++c) {
      const auto q = eig.eigenvectors().col(static_cast<Eigen::Index>(block - 1 - c));
      for (std::size_t p = 0; p < block; ++p) {
        const double w = q(static_cast<Eigen::Index>(p));
        for (std::size_t k = 0; k < dim; ++k) rotated[c][k] += w * y[p][k];
      }
    }
    orthonormalize(rotated);
    v.swap(rotated);
  }
  if (!converged)
    throw NumericalError("bound-state iteration did not converge in " + std::to_string(options.max_iterations) +
                         " iterations");

  BoundStateSet out;
  out.requested = options.count;
  out.iterations = iter;
  out.shift = sigma;
  const double scale = 1.0 / std::sqrt(grid.step());
  std::vector<double> hv(dim);
  for (std::size_t c = 0; c < wanted; ++c) {
    if (!(theta[c] < ceiling)) break;
    auto& vec = v[c];
    h.multiply(vec, hv);
    double res = 0.0;
    for (std::size_t k = 0; k < dim; ++k) res = std::max(res, std::abs(hv[k] - theta[c] * vec[k]));
    const auto peak = std::ranges::max_element(vec, {}, [](double x) { return std::abs(x); });
    const double sign = *peak < 0.0 ? -1.0 : 1.0;
    for (double& x : vec) x *= sign * scale;
    out.energies.push_back(theta[c]);
    out.wavefunctions.push_back(std::move(vec));
    out.residuals.push_back(res);
  }
  return out;
}

void write_wavefunctions(const std::filesystem::path& path, const PotentialGrid& grid,
                         std::span<const std::vector<double>> columns) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  const std::size_t nc = grid.n_channels();
  const auto nodes = grid.nodes();
  char buf[32];
  for (std::size_t n = 0; n < grid.n_nodes(); ++n) {
    std::snprintf(buf, sizeof buf, "%.11e", nodes[n]);
    out << buf;
    for (std::size_t i = 0; i < nc; ++i)
      for (const auto& col : columns) {
        std::snprintf(buf, sizeof buf, ",%.11e", col[flat_index(i, n, nc)]);
        out << buf;
      }
    out << '\n';
  }
  if (!out) throw InputError("write failed for " + path.string());
}

}  // namespace ccs
