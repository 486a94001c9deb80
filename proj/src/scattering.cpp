#include "ccs/scattering.hpp"

#include <cmath>
#include <numbers>

#include "ccs/errors.hpp"

namespace ccs {

namespace {

Eigen::MatrixXcd one_minus_ik(const Eigen::MatrixXd& k) {
  const std::complex<double> i(0.0, 1.0);
  return Eigen::MatrixXcd::Identity(k.rows(), k.cols()) - i * k.cast<std::complex<double>>();
}

}  // namespace

ScatteringMatrices s_and_t(const Eigen::MatrixXd& k) {
  if (k.rows() != k.cols()) throw InputError("s_and_t: K must be square");
  const std::complex<double> i(0.0, 1.0);
  ScatteringMatrices out;
  out.k = k;
  // K and (I - iK) commute, so K (I - iK)^-1 = (I - iK)^-1 K.
  out.t = one_minus_ik(k).partialPivLu().solve(k.cast<std::complex<double>>());
  out.s = Eigen::MatrixXcd::Identity(k.rows(), k.cols()) + 2.0 * i * out.t;
  return out;
}

Eigen::MatrixXd cross_section(const ScatteringMatrices& mats, const std::vector<double>& momenta,
                              const std::vector<ChannelSpin>& spins, double total_j) {
  const auto o = static_cast<std::size_t>(mats.t.rows());
  if (momenta.size() != o) throw InputError("cross_section: need one momentum per open channel");
  if (spins.size() != o) throw InputError("cross_section: missing spin metadata for the open channels");
  if (!(total_j >= 0.0) || std::fmod(2.0 * total_j, 1.0) != 0.0)
    throw InputError("cross_section: total J must be a non-negative integer or half-integer");
  Eigen::MatrixXd sigma(mats.t.rows(), mats.t.cols());
  for (std::size_t i = 0; i < o; ++i) {
    if (!(momenta[i] > 0.0)) throw InputError("cross_section: momenta must be positive");
    for (std::size_t j = 0; j < o; ++j) {
      const double degeneracy = (2.0 * spins[j].j_alpha + 1.0) * (2.0 * spins[j].j_beta + 1.0);
      const auto f = mats.t(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) / momenta[i];
      sigma(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          4.0 * std::numbers::pi * (2.0 * total_j + 1.0) / degeneracy * std::norm(f);
    }
  }
  return sigma;
}

std::complex<double> pole_function(const Eigen::MatrixXd& k) {
  if (k.size() == 0) return 1.0;
  return one_minus_ik(k).partialPivLu().determinant();
}

}  // namespace ccs
