#pragma once

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "ccs/io_model.hpp"

namespace ccs {

struct ScatteringMatrices {
  Eigen::MatrixXd k;
  Eigen::MatrixXcd s;  // (I + iK)(I - iK)^-1
  Eigen::MatrixXcd t;  // K (I - iK)^-1, S = I + 2iT
};

/// T from one complex solve with I - iK; S = I + 2iT.
ScatteringMatrices s_and_t(const Eigen::MatrixXd& k);

/// Partial-wave cross sections for one energy. spins[j] belongs to open
/// channel j (same order as the K-matrix); J is the total angular momentum.
Eigen::MatrixXd cross_section(const ScatteringMatrices& mats, const std::vector<double>& momenta,
                              const std::vector<ChannelSpin>& spins, double total_j);

/// det(I - iK); its complex zeros are the resonances.
std::complex<double> pole_function(const Eigen::MatrixXd& k);

}  // namespace ccs
