#include "ccs/rational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "ccs/errors.hpp"

namespace ccs {

Complex RationalApproximant::operator()(Complex z) const {
  Complex num = 0.0;
  Complex den = 0.0;
  for (std::size_t k = 0; k < support.size(); ++k) {
    const Complex diff = z - support[k];
    if (diff == Complex(0.0)) return values[k];
    const Complex c = weights[k] / diff;
    num += c * values[k];
    den += c;
  }
  return num / den;
}

RationalApproximant aaa_fit(std::span<const double> energies, std::span<const Complex> values,
                            const AaaOptions& options) {
  const std::size_t n = energies.size();
  if (values.size() != n) throw InputError("aaa_fit: energies and values differ in length");
  if (n < 4) throw InputError("aaa_fit: need at least 4 samples");
  {
    std::vector<double> sorted(energies.begin(), energies.end());
    std::ranges::sort(sorted);
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw InputError("aaa_fit: sample energies must be distinct");
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!std::isfinite(energies[i]) || !std::isfinite(values[i].real()) || !std::isfinite(values[i].imag()))
      throw InputError("aaa_fit: non-finite sample");

  double scale = 0.0;
  for (const auto& v : values) scale = std::max(scale, std::abs(v));
  const double target = options.tolerance * scale;

  std::vector<Complex> fit(n, std::accumulate(values.begin(), values.end(), Complex(0.0)) / static_cast<double>(n));
  std::vector<bool> is_support(n, false);
  std::vector<std::size_t> support_index;
  RationalApproximant out;
  const std::size_t max_support = std::min(options.max_degree + 1, n - 1);

  for (std::size_t m = 1; m <= max_support; ++m) {
    std::size_t pick = 0;
    double worst = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (is_support[i]) continue;
      const double e = std::abs(values[i] - fit[i]);
      if (e > worst) {
        worst = e;
        pick = i;
      }
    }
    is_support[pick] = true;
    support_index.push_back(pick);

    std::vector<std::size_t> rest;
    rest.reserve(n - m);
    for (std::size_t i = 0; i < n; ++i)
      if (!is_support[i]) rest.push_back(i);

    const auto rows = static_cast<Eigen::Index>(rest.size());
    const auto cols = static_cast<Eigen::Index>(m);
    Eigen::MatrixXcd cauchy(rows, cols);
    Eigen::MatrixXcd loewner(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c) {
        const std::size_t i = rest[static_cast<std::size_t>(r)];
        const std::size_t k = support_index[static_cast<std::size_t>(c)];
        const Complex ck = 1.0 / (energies[i] - energies[k]);
        cauchy(r, c) = ck;
        loewner(r, c) = (values[i] - values[k]) * ck;
      }
    const Eigen::BDCSVD<Eigen::MatrixXcd> svd(loewner, Eigen::ComputeFullV);
    const Eigen::VectorXcd w = svd.matrixV().col(cols - 1);

    Eigen::VectorXcd wf(cols);
    for (Eigen::Index c = 0; c < cols; ++c) wf(c) = w(c) * values[support_index[static_cast<std::size_t>(c)]];
    const Eigen::VectorXcd num = cauchy * wf;
    const Eigen::VectorXcd den = cauchy * w;
    double err = 0.0;
    for (Eigen::Index r = 0; r < rows; ++r) {
      const std::size_t i = rest[static_cast<std::size_t>(r)];
      fit[i] = num(r) / den(r);
      const double e = std::abs(values[i] - fit[i]);
      err = std::isfinite(e) ? std::max(err, e) : std::numeric_limits<double>::infinity();
    }
    for (std::size_t k : support_index) fit[k] = values[k];

    out.support.clear();
    out.values.clear();
    out.weights.clear();
    for (Eigen::Index c = 0; c < cols; ++c) {
      const std::size_t k = support_index[static_cast<std::size_t>(c)];
      out.support.push_back(energies[k]);
      out.values.push_back(values[k]);
      out.weights.push_back(w(c));
    }
    out.max_error = err;
    if (err <= target) {
      out.converged = true;
      break;
    }
  }
  return out;
}

namespace {

// Finite generalized eigenvalues of the arrowhead pencil
// [[0, top^T], [1, diag(z)]] - lambda diag(0, 1, ..., 1).
std::vector<Complex> arrowhead_eigenvalues(std::span<const double> z, std::span<const Complex> top) {
  const auto m = static_cast<lapack_int>(z.size());
  const lapack_int size = m + 1;
  std::vector<lapack_complex_double> a(static_cast<std::size_t>(size * size), lapack_complex_double{0.0, 0.0});
  std::vector<lapack_complex_double> b(a.size(), lapack_complex_double{0.0, 0.0});
  const auto at = [size](lapack_int r, lapack_int c) { return static_cast<std::size_t>(c * size + r); };
  for (lapack_int k = 0; k < m; ++k) {
    a[at(0, k + 1)] = {top[static_cast<std::size_t>(k)].real(), top[static_cast<std::size_t>(k)].imag()};
    a[at(k + 1, 0)] = {1.0, 0.0};
    a[at(k + 1, k + 1)] = {z[static_cast<std::size_t>(k)], 0.0};
    b[at(k + 1, k + 1)] = {1.0, 0.0};
  }
  std::vector<lapack_complex_double> alpha(static_cast<std::size_t>(size));
  std::vector<lapack_complex_double> beta(static_cast<std::size_t>(size));
  const lapack_int info = LAPACKE_zggev(LAPACK_COL_MAJOR, 'N', 'N', size, a.data(), size, b.data(), size,
                                        alpha.data(), beta.data(), nullptr, 1, nullptr, 1);
  if (info != 0)
    throw NumericalError("rational fit: generalized eigenproblem failed (zggev info " + std::to_string(info) + ")");

  double reach = 1.0;
  for (double x : z) reach = std::max(reach, std::abs(x));
  std::vector<Complex> out;
  for (lapack_int k = 0; k < size; ++k) {
    const Complex al = alpha[static_cast<std::size_t>(k)];
    const Complex be = beta[static_cast<std::size_t>(k)];
    // Infinite eigenvalues come back with beta at roundoff level.
    if (std::abs(be) == 0.0 || std::abs(al) > 1e8 * reach * std::abs(be)) continue;
    out.push_back(al / be);
  }
  std::ranges::sort(out, [](Complex x, Complex y) { return x.real() < y.real() || (x.real() == y.real() && x.imag() < y.imag()); });
  return out;
}

}  // namespace

PolesAndZeros poles_and_zeros(const RationalApproximant& approx) {
  PolesAndZeros out;
  const std::size_t m = approx.support.size();
  if (m < 2) return out;

  const auto pole_positions = arrowhead_eigenvalues(approx.support, approx.weights);
  std::vector<Complex> wf(m);
  for (std::size_t k = 0; k < m; ++k) wf[k] = approx.weights[k] * approx.values[k];
  out.zeros = arrowhead_eigenvalues(approx.support, wf);

  for (const Complex p : pole_positions) {
    Complex num = 0.0;
    Complex dden = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const Complex diff = p - approx.support[k];
      num += wf[k] / diff;
      dden -= approx.weights[k] / (diff * diff);
    }
    out.poles.push_back({p, num / dden});
  }
  return out;
}

std::string_view to_string(PoleClass c) { return c == PoleClass::genuine ? "genuine" : "spurious"; }

std::string_view label(const ScreenedPole& pole) {
  if (pole.classification == PoleClass::spurious) return "spurious";
  return pole.matched ? "genuine" : "genuine-unmatched";
}

std::vector<ScreenedPole> screen_poles(std::span<const PoleResidue> poles, std::span<const double> k_pole_estimates,
                                       const ScreeningOptions& options) {
  return screen_poles(poles, {}, k_pole_estimates, options);
}

std::vector<ScreenedPole> screen_poles(std::span<const PoleResidue> poles, std::span<const Complex> zeros,
                                       std::span<const double> k_pole_estimates, const ScreeningOptions& options) {
  std::vector<ScreenedPole> out;
  if (poles.empty()) return out;

  std::vector<double> mags;
  for (const auto& p : poles) mags.push_back(std::abs(p.residue));
  std::ranges::sort(mags);
  const std::size_t h = mags.size() / 2;
  const double median = mags.size() % 2 ? mags[h] : 0.5 * (mags[h - 1] + mags[h]);

  for (std::size_t a = 0; a < poles.size(); ++a) {
    const auto& p = poles[a];
    ScreenedPole s{p.position, p.residue, PoleClass::genuine, false};
    bool spurious = std::abs(p.residue) < options.residue_tol * median || std::abs(p.position.imag()) > options.axis_tol;
    for (const Complex& z : zeros)
      if (std::abs(p.position - z) < options.doublet_tol) spurious = true;
    for (std::size_t b = 0; b < poles.size() && !spurious; ++b) {
      if (b == a) continue;
      const auto& q = poles[b];
      if (std::abs(p.position - q.position) > options.axis_tol) continue;
      const double total = std::abs(p.residue) + std::abs(q.residue);
      if (std::abs(p.residue + q.residue) <= options.residue_tol * total) spurious = true;
    }
    if (spurious) {
      s.classification = PoleClass::spurious;
    } else {
      for (double e : k_pole_estimates)
        if (std::abs(p.position.real() - e) <= options.match_tol) s.matched = true;
    }
    out.push_back(s);
  }
  return out;
}

namespace {

// Mismatch of a linear prediction of y[to] from y[from], y[from2].
double prediction_error(std::span<const double> x, std::span<const double> y, std::size_t from2, std::size_t from,
                        std::size_t to) {
  const double slope = (y[from] - y[from2]) / (x[from] - x[from2]);
  const double predicted = y[from] + slope * (x[to] - x[from]);
  const double scale = std::abs(y[from]) + std::abs(y[to]);
  return scale > 0.0 ? std::abs(y[to] - predicted) / scale : 0.0;
}

}  // namespace

std::vector<double> estimate_k_poles(std::span<const double> energies, std::span<const double> g) {
  const std::size_t n = energies.size();
  if (g.size() != n) throw InputError("estimate_k_poles: length mismatch");
  std::vector<double> inv(n);
  for (std::size_t k = 0; k < n; ++k) inv[k] = std::isfinite(g[k]) ? 1.0 / g[k] : 0.0;

  std::vector<double> out;
  for (std::size_t k = 0; k < n; ++k)
    if (!std::isfinite(g[k])) out.push_back(energies[k]);

  for (std::size_t a = 0; a + 1 < n; ++a) {
    const std::size_t b = a + 1;
    if (!std::isfinite(g[a]) || !std::isfinite(g[b])) continue;
    if (!(g[a] * g[b] < 0.0)) continue;
    double err_direct = 0.0;
    double err_inverse = 0.0;
    int votes = 0;
    if (a >= 1 && std::isfinite(g[a - 1])) {
      err_direct += prediction_error(energies, g, a - 1, a, b);
      err_inverse += prediction_error(energies, inv, a - 1, a, b);
      ++votes;
    }
    if (b + 1 < n && std::isfinite(g[b + 1])) {
      err_direct += prediction_error(energies, g, b + 1, b, a);
      err_inverse += prediction_error(energies, inv, b + 1, b, a);
      ++votes;
    }
    const bool pole = votes > 0 ? err_inverse < err_direct : std::min(std::abs(g[a]), std::abs(g[b])) > 1.0;
    if (!pole) continue;
    out.push_back(energies[a] + (energies[b] - energies[a]) * inv[a] / (inv[a] - inv[b]));
  }
  std::ranges::sort(out);
  return out;
}

ResonanceReport find_resonances(std::span<const Complex> zeros, std::span<const ScreenedPole> poles,
                                const ComplexDomain& domain, double axis_tol) {
  ResonanceReport report;
  report.poles.assign(poles.begin(), poles.end());
  report.zeros.assign(zeros.begin(), zeros.end());
  for (const Complex z : zeros) {
    if (!(z.imag() < 0.0) || !domain.contains(z)) continue;
    const bool shadowed = std::ranges::any_of(poles, [&](const ScreenedPole& p) {
      return p.classification == PoleClass::spurious && std::abs(p.position - z) <= axis_tol;
    });
    if (shadowed) continue;
    report.resonances.push_back({z, z.real(), -2.0 * z.imag()});
  }
  std::ranges::sort(report.resonances, {}, &Resonance::mass);
  return report;
}

std::vector<Complex> resampled_zeros(std::span<const double> energies, std::span<const Complex> values,
                                     std::span<const Complex> zeros, double tol, const AaaOptions& options) {
  if (energies.size() != values.size()) throw InputError("resampled_zeros: energies and values differ in length");
  std::vector<std::vector<Complex>> halves;
  for (std::size_t parity = 0; parity < 2; ++parity) {
    std::vector<double> e;
    std::vector<Complex> f;
    for (std::size_t k = parity; k < energies.size(); k += 2) {
      e.push_back(energies[k]);
      f.push_back(values[k]);
    }
    halves.push_back(poles_and_zeros(aaa_fit(e, f, options)).zeros);
  }
  std::vector<Complex> kept;
  for (const Complex z : zeros) {
    const bool stable = std::ranges::all_of(halves, [&](const std::vector<Complex>& h) {
      return std::ranges::any_of(h, [&](Complex w) { return std::abs(w - z) <= tol; });
    });
    if (stable) kept.push_back(z);
  }
  return kept;
}

}  // namespace ccs
