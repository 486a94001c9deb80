#include "ccs/hamiltonian.hpp"

#include <algorithm>
#include <cmath>

#include "ccs/errors.hpp"

namespace ccs {

BandedMatrix::BandedMatrix(std::size_t dim, std::size_t bandwidth)
    : dim_(dim), bandwidth_(bandwidth), data_((2 * bandwidth + 1) * dim, 0.0) {}

double BandedMatrix::value(std::size_t a, std::size_t b) const {
  const std::size_t gap = a > b ? a - b : b - a;
  return gap > bandwidth_ ? 0.0 : at(a, b);
}

void BandedMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  const std::size_t n = dim_;
  const std::size_t k = bandwidth_;
  std::fill(y.begin(), y.end(), 0.0);
  for (std::size_t g = 0; g <= 2 * k; ++g) {
    // row g: element (b - (k - g), b) for offset o = k - g = b - a
    const double* diag = data_.data() + g * n;
    if (g <= k) {
      const std::size_t off = k - g;
      for (std::size_t b = off; b < n; ++b) y[b - off] += diag[b] * x[b];
    } else {
      const std::size_t off = g - k;
      for (std::size_t b = 0; b + off < n; ++b) y[b + off] += diag[b] * x[b];
    }
  }
}

double BandedMatrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double BandedMatrix::norm_inf() const {
  std::vector<double> sums(dim_, 0.0);
  const std::size_t k = bandwidth_;
  for (std::size_t g = 0; g <= 2 * k; ++g) {
    const double* diag = data_.data() + g * dim_;
    for (std::size_t b = 0; b < dim_; ++b) {
      const long a = static_cast<long>(b) + static_cast<long>(g) - static_cast<long>(k);
      if (a >= 0 && a < static_cast<long>(dim_)) sums[static_cast<std::size_t>(a)] += std::abs(diag[b]);
    }
  }
  return sums.empty() ? 0.0 : *std::ranges::max_element(sums);
}

Eigen::MatrixXd BandedMatrix::to_dense() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(dim_));
  for (std::size_t a = 0; a < dim_; ++a)
    for (std::size_t b = (a > bandwidth_ ? a - bandwidth_ : 0); b <= std::min(dim_ - 1, a + bandwidth_); ++b)
      m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = at(a, b);
  return m;
}

BandedMatrix assemble(const ChannelTable& channels, const PotentialGrid& grid) {
  const std::size_t nc = channels.size();
  if (nc == 0) throw InputError("assemble: no channels");
  if (grid.n_channels() != nc) throw InputError("assemble: potential has a different channel count");
  const std::size_t m = grid.n_nodes();
  const double d = grid.step();
  const auto nodes = grid.nodes();

  BandedMatrix h(nc * m, nc);
  std::vector<double> kinetic(nc);
  for (std::size_t i = 0; i < nc; ++i) kinetic[i] = 1.0 / (2.0 * channels[i].mu * d * d);

  for (std::size_t n = 0; n < m; ++n) {
    const double r = nodes[n];
    for (std::size_t i = 0; i < nc; ++i) {
      const std::size_t a = flat_index(i, n, nc);
      const auto& ch = channels[i];
      const double centrifugal = static_cast<double>(ch.l * (ch.l + 1)) / (2.0 * ch.mu * r * r);
      for (std::size_t j = 0; j < nc; ++j) {
        const std::size_t b = flat_index(j, n, nc);
        h.at(a, b) = i == j ? 2.0 * kinetic[i] + centrifugal + grid(n, i, j) : grid(n, i, j);
      }
      // Neighbouring nodes of the same channel sit exactly N apart.
      if (n + 1 < m) {
        h.at(a, a + nc) = -kinetic[i];
        h.at(a + nc, a) = -kinetic[i];
      }
    }
  }
  return h;
}

BandedMatrix shift(const BandedMatrix& h, double energy) {
  BandedMatrix out = h;
  for (double& v : out.row(h.bandwidth())) v -= energy;
  return out;
}

BoundaryMatrix::BoundaryMatrix(std::size_t dim, std::vector<std::size_t> open_channels, std::vector<Entry> entries)
    : dim_(dim), open_(std::move(open_channels)), entries_(std::move(entries)) {}

std::vector<double> BoundaryMatrix::column(std::size_t j) const {
  std::vector<double> col(dim_, 0.0);
  col[entries_[j].row] = entries_[j].value;
  return col;
}

std::vector<std::size_t> open_channels(const ChannelTable& channels, double energy) {
  std::vector<std::size_t> open;
  for (std::size_t i = 0; i < channels.size(); ++i)
    if (!channels[i].confining() && energy - channels[i].threshold >= 0.0) open.push_back(i);
  return open;
}

BoundaryMatrix boundary_rhs(const ChannelTable& channels, double energy, double step, std::size_t n_nodes) {
  auto open = open_channels(channels, energy);
  if (open.empty())
    throw NumericalError("no open channel at E = " + std::to_string(energy) +
                         ": bound-state regime, use the bound-state solver");
  const std::size_t nc = channels.size();
  std::vector<BoundaryMatrix::Entry> entries;
  for (std::size_t i : open)
    entries.push_back({flat_index(i, n_nodes - 1, nc), 1.0 / (2.0 * channels[i].mu * step * step)});
  return BoundaryMatrix(nc * n_nodes, std::move(open), std::move(entries));
}

}  // namespace ccs
