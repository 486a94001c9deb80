#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "ccs/io_model.hpp"
#include "ccs/solver.hpp"

namespace ccs {

/// Riccati-Bessel functions S_l(x) = x j_l(x) and C_l(x) = -x y_l(x).
struct RiccatiPair {
  double s = 0.0;
  double c = 0.0;
};

/// C_l by upward recurrence; S_l upward for x > l, otherwise from the
/// backward-recurrence ratio S_{l+1}/S_l and the cross product
/// S_l C_{l+1} - S_{l+1} C_l = 1. Throws InputError for x <= 0 or l < 0.
RiccatiPair riccati(int l, double x);

/// All orders 0..l_max at once.
std::vector<RiccatiPair> riccati_all(int l_max, double x);

/// Scattering momentum sqrt(2 mu (E - T)).
double channel_momentum(const Channel& channel, double energy);

/// Fewest grid nodes the projection window [R - pi/p, R] must contain.
inline constexpr std::size_t kMinWindowNodes = 16;

struct ProjectionXY {
  std::vector<std::size_t> open_channels;
  Eigen::MatrixXd x;  // rows: open channels, columns: solutions
  Eigen::MatrixXd y;
};

/// Projects each open-channel component onto sin/cos(p r - l pi/2) over the
/// last half wavelength [R - pi/p_i, R] by the trapezoidal rule. u at the
/// window start is linearly interpolated; u(R) is the imposed boundary value.
ProjectionXY extract_xy(const WavefunctionSet& u, const ChannelTable& channels);

struct KMatrixResult {
  double energy = 0.0;
  std::vector<std::size_t> open_channels;
  Eigen::MatrixXd x;
  Eigen::MatrixXd y;
  Eigen::MatrixXd k_raw;  // Y X^-1
  Eigen::MatrixXd k;      // (k_raw + k_raw^T) / 2
  double asymmetry = 0.0;
  bool warned = false;
};

inline constexpr double kDefaultAsymmetryTolerance = 0.01;
inline constexpr double kMaxProjectionCondition = 1e12;

/// max over off-diagonal pairs of |K_ij - K_ji| / |K_ij + K_ji|.
double asymmetry(const Eigen::MatrixXd& k);

/// Throws NumericalError when cond(X) >= 1e12 (E sits on a K pole of the
/// chosen boundary basis).
KMatrixResult k_matrix(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                       double tolerance = kDefaultAsymmetryTolerance);

}  // namespace ccs
