#pragma once

#include <unistd.h>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ccs/hamiltonian.hpp"
#include "ccs/io_model.hpp"

namespace test {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("ccs_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline ccs::ChannelTable single_channel(int l, double mu, double threshold = 0.0) {
  ccs::ChannelTable t;
  t.channels.push_back({l, mu, threshold, {}});
  return t;
}

/// Grid r_n = n d, n = 1..m, with V(r) given as a row-major N x N matrix.
inline ccs::PotentialGrid sampled_grid(std::size_t n_channels, double step, std::size_t m,
                                       const std::function<std::vector<double>(double)>& v) {
  std::vector<double> nodes(m);
  std::vector<double> values;
  values.reserve(m * n_channels * n_channels);
  for (std::size_t n = 0; n < m; ++n) {
    nodes[n] = static_cast<double>(n + 1) * step;
    const auto row = v(nodes[n]);
    values.insert(values.end(), row.begin(), row.end());
  }
  return ccs::PotentialGrid(std::move(nodes), n_channels, std::move(values));
}

/// H_{ij,nm} evaluated entry by entry from its defining formula.
inline Eigen::MatrixXd dense_hamiltonian(const ccs::ChannelTable& ch, const ccs::PotentialGrid& g) {
  const std::size_t nc = g.n_channels();
  const std::size_t m = g.n_nodes();
  const double d = g.step();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(nc * m), static_cast<Eigen::Index>(nc * m));
  for (std::size_t i = 0; i < nc; ++i)
    for (std::size_t j = 0; j < nc; ++j)
      for (std::size_t n = 0; n < m; ++n)
        for (std::size_t k = 0; k < m; ++k) {
          const double kin = 1.0 / (2.0 * ch[i].mu * d * d);
          const double dij = i == j ? 1.0 : 0.0;
          const double dnm = n == k ? 1.0 : 0.0;
          const double lap = (k + 1 == n ? 1.0 : 0.0) - 2.0 * dnm + (k == n + 1 ? 1.0 : 0.0);
          const double r = g.nodes()[n];
          const double l = ch[i].l;
          double value = 0.0;
          // diagonal entries summed in the library's order: 2 kin + centrifugal + V
          if (i == j && n == k) value = 2.0 * kin + l * (l + 1.0) / (2.0 * ch[i].mu * r * r) + g(n, i, j);
          else value = -dij * lap * kin + dnm * g(n, i, j);
          h(static_cast<Eigen::Index>(i + nc * n), static_cast<Eigen::Index>(j + nc * k)) = value;
        }
  return h;
}

/// tan(delta_0) for the attractive s-wave square well V = -v0 for r < r0.
inline double square_well_tan_delta(double energy, double v0, double r0, double mu) {
  const double k = std::sqrt(2.0 * mu * energy);
  const double q = std::sqrt(2.0 * mu * (energy + v0));
  const double t = k * std::tan(q * r0) / q;
  return (t - std::tan(k * r0)) / (1.0 + t * std::tan(k * r0));
}

inline Eigen::MatrixXd random_symmetric(std::mt19937_64& rng, Eigen::Index o, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Eigen::MatrixXd k(o, o);
  for (Eigen::Index i = 0; i < o; ++i)
    for (Eigen::Index j = i; j < o; ++j) k(i, j) = k(j, i) = u(rng);
  return k;
}

}  // namespace test
