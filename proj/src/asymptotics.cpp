#include "ccs/asymptotics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "ccs/errors.hpp"

namespace ccs {

namespace {

// S_{l+1}(x) / S_l(x) from the backward recurrence
// S_{k-1} = (2k+1)/x S_k - S_{k+1}, started far above both l and x
// where S is the minimal solution.
double riccati_s_ratio(int l, double x) {
  const int start = l + 1 + static_cast<int>(std::ceil(x)) + 60 + static_cast<int>(std::sqrt(40.0 * (l + 1 + x)));
  double ratio = 0.0;  // S_{k+1}/S_k at k = start
  for (int k = start; k > l; --k) ratio = 1.0 / ((2.0 * k + 1.0) / x - ratio);
  return ratio;
}

}  // namespace

std::vector<RiccatiPair> riccati_all(int l_max, double x) {
  if (l_max < 0) throw InputError("riccati: l must be non-negative");
  if (!(x > 0.0) || !std::isfinite(x)) throw InputError("riccati: argument must be positive and finite");
  std::vector<RiccatiPair> out(static_cast<std::size_t>(l_max) + 1);
  const double sx = std::sin(x);
  const double cx = std::cos(x);

  // C needs one order past l_max for the cross-product normalization.
  std::vector<double> c(static_cast<std::size_t>(l_max) + 2);
  c[0] = cx;
  c[1] = cx / x + sx;
  for (int k = 1; k <= l_max; ++k) c[k + 1] = (2.0 * k + 1.0) / x * c[k] - c[k - 1];

  std::vector<double> s(static_cast<std::size_t>(l_max) + 1);
  if (x > l_max) {
    s[0] = sx;
    if (l_max >= 1) s[1] = sx / x - cx;
    for (int k = 1; k < l_max; ++k) s[k + 1] = (2.0 * k + 1.0) / x * s[k] - s[k - 1];
  } else {
    const double ratio = riccati_s_ratio(l_max, x);
    s[l_max] = 1.0 / (c[l_max + 1] - ratio * c[l_max]);
    // Downward from l_max is the stable direction for S when x <= l.
    double above = ratio * s[l_max];
    for (int k = l_max; k > 0; --k) {
      const double below = (2.0 * k + 1.0) / x * s[k] - above;
      above = s[k];
      s[k - 1] = below;
    }
  }
  for (int k = 0; k <= l_max; ++k) out[k] = {s[k], c[k]};
  return out;
}

RiccatiPair riccati(int l, double x) { return riccati_all(l, x).back(); }

double channel_momentum(const Channel& channel, double energy) {
  return std::sqrt(2.0 * channel.mu * (energy - channel.threshold));
}

ProjectionXY extract_xy(const WavefunctionSet& u, const ChannelTable& channels) {
  const auto& open = u.open_channels();
  const std::size_t o = open.size();
  const std::size_t m = u.n_nodes();
  const double d = u.step();
  const double r_max = u.radius();

  ProjectionXY out;
  out.open_channels = open;
  out.x.resize(static_cast<Eigen::Index>(o), static_cast<Eigen::Index>(o));
  out.y.resize(static_cast<Eigen::Index>(o), static_cast<Eigen::Index>(o));

  for (std::size_t row = 0; row < o; ++row) {
    const std::size_t i = open[row];
    const auto& ch = channels[i];
    const double p = channel_momentum(ch, u.energy());
    if (!(p > 0.0)) throw NumericalError("extract_xy: zero momentum in channel " + std::to_string(i + 1));
    const double a = r_max - std::numbers::pi / p;
    // first node index (1-based radius n d) with n d >= a
    const double first_real = std::ceil(a / d - 1e-9);
    if (!(first_real >= 1.0) || first_real > static_cast<double>(m) ||
        static_cast<double>(m) - first_real + 1.0 < static_cast<double>(kMinWindowNodes)) {
      std::ostringstream msg;
      msg << "projection window [R - pi/p, R] for channel " << i + 1 << " at E = " << u.energy()
          << " holds too few nodes (need " << kMinWindowNodes << "); increase R or E - T";
      throw NumericalError(msg.str());
    }
    const std::size_t first = static_cast<std::size_t>(first_real);
    const double phase = ch.l * std::numbers::pi / 2.0;
    const double norm = std::sqrt(2.0 * p * p * p / (std::numbers::pi * ch.mu));

    for (std::size_t col = 0; col < o; ++col) {
      // node n (1-based) value, with u(0) = 0 and u(R) = boundary value
      const auto value = [&](std::size_t n) {
        if (n == 0) return 0.0;
        if (n == m + 1) return u.boundary_value(i, col);
        return u(i, col, n - 1);
      };
      const double r_first = d * static_cast<double>(first);
      double sin_sum = 0.0;
      double cos_sum = 0.0;
      double prev_r = a;
      double prev_u;
      {
        const double r_below = d * static_cast<double>(first - 1);
        const double t = (a - r_below) / d;
        prev_u = (1.0 - t) * value(first - 1) + t * value(first);
      }
      double prev_s = prev_u * std::sin(p * prev_r - phase);
      double prev_c = prev_u * std::cos(p * prev_r - phase);
      for (std::size_t n = first; n <= m + 1; ++n) {
        const double r = n == m + 1 ? r_max : r_first + d * static_cast<double>(n - first);
        const double h = r - prev_r;
        const double un = value(n);
        const double sv = un * std::sin(p * r - phase);
        const double cv = un * std::cos(p * r - phase);
        if (h > 0.0) {
          sin_sum += 0.5 * h * (prev_s + sv);
          cos_sum += 0.5 * h * (prev_c + cv);
        }
        prev_r = r;
        prev_s = sv;
        prev_c = cv;
      }
      out.x(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = norm * sin_sum;
      out.y(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = norm * cos_sum;
    }
  }
  return out;
}

double asymmetry(const Eigen::MatrixXd& k) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < k.rows(); ++i)
    for (Eigen::Index j = i + 1; j < k.cols(); ++j) {
      const double diff = std::abs(k(i, j) - k(j, i));
      if (diff == 0.0) continue;
      const double sum = std::abs(k(i, j) + k(j, i));
      worst = std::max(worst, sum > 0.0 ? diff / sum : std::numeric_limits<double>::infinity());
    }
  return worst;
}

KMatrixResult k_matrix(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, double tolerance) {
  if (x.rows() != x.cols() || y.rows() != x.rows() || y.cols() != x.cols())
    throw InputError("k_matrix: X and Y must be square and of equal size");
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(x);
  const auto& sv = svd.singularValues();
  const double cond = sv.size() == 0 ? 1.0 : sv(0) / sv(sv.size() - 1);
  if (!(cond < kMaxProjectionCondition)) {
    std::ostringstream msg;
    msg << "X matrix is singular (condition " << cond << "): the energy sits on a K-matrix pole of the "
        << "boundary basis; perturb E";
    throw NumericalError(msg.str());
  }
  KMatrixResult out;
  out.x = x;
  out.y = y;
  // K X = Y  <=>  X^T K^T = Y^T
  out.k_raw = x.transpose().fullPivLu().solve(y.transpose()).transpose();
  out.k = 0.5 * (out.k_raw + out.k_raw.transpose());
  out.asymmetry = asymmetry(out.k_raw);
  out.warned = out.asymmetry > tolerance;
  return out;
}

}  // namespace ccs
