#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace ccs {

using Complex = std::complex<double>;

/// Barycentric rational r(z) = sum w_k f_k / (z - z_k) / sum w_k / (z - z_k).
struct RationalApproximant {
  std::vector<double> support;
  std::vector<Complex> values;
  std::vector<Complex> weights;
  double max_error = 0.0;  // max |F - r| over the samples
  bool converged = false;

  Complex operator()(Complex z) const;
  std::size_t degree() const { return support.empty() ? 0 : support.size() - 1; }
};

struct AaaOptions {
  /// Stop once max |F - r| <= tol * max |F|.
  double tolerance = 1e-9;
  std::size_t max_degree = 100;
};

/// Greedy AAA fit on real sample points. Throws InputError for fewer than
/// 4 samples, repeated energies or non-finite values.
RationalApproximant aaa_fit(std::span<const double> energies, std::span<const Complex> values,
                            const AaaOptions& options = {});

struct PoleResidue {
  Complex position;
  Complex residue;
};

struct PolesAndZeros {
  std::vector<PoleResidue> poles;
  std::vector<Complex> zeros;
};

/// Finite eigenvalues of the (m+1)-dimensional arrowhead pencils for the
/// denominator (poles) and numerator (zeros); residues from N(z)/D'(z).
PolesAndZeros poles_and_zeros(const RationalApproximant& approx);

enum class PoleClass { genuine, spurious };

struct ScreenedPole {
  Complex position;
  Complex residue;
  PoleClass classification = PoleClass::genuine;
  /// Genuine poles only: a real-axis K-pole estimate lies within match_tol.
  bool matched = false;
};

std::string_view to_string(PoleClass c);
/// "genuine", "genuine-unmatched" or "spurious".
std::string_view label(const ScreenedPole& pole);

struct ScreeningOptions {
  double axis_tol = 0.2;
  double residue_tol = 1e-6;
  double match_tol = 0.1;
  /// A pole with a zero of the approximant closer than this is a
  /// pole-zero (Froissart) doublet and therefore spurious; 0 disables.
  double doublet_tol = 0.0;
};

/// A pole is spurious if its residue is below residue_tol * median|residue|,
/// if |Im| > axis_tol, or if it sits within axis_tol of another pole whose
/// residue cancels its own to residue_tol.
std::vector<ScreenedPole> screen_poles(std::span<const PoleResidue> poles, std::span<const double> k_pole_estimates,
                                       const ScreeningOptions& options);
/// As above, additionally marking poles within doublet_tol of a zero.
std::vector<ScreenedPole> screen_poles(std::span<const PoleResidue> poles, std::span<const Complex> zeros,
                                       std::span<const double> k_pole_estimates, const ScreeningOptions& options);

/// Real-axis K-pole estimates from a sampled scalar g(E) (K itself for one
/// open channel, det K otherwise). A sign change is a pole when 1/g
/// interpolates more smoothly across it than g does; non-finite samples are
/// blowups and count as poles at their energy.
std::vector<double> estimate_k_poles(std::span<const double> energies, std::span<const double> g);

struct ComplexDomain {
  double re_min = -1e300;
  double re_max = 1e300;
  double im_min = -1e300;
  double im_max = 0.0;

  bool contains(Complex z) const {
    return z.real() >= re_min && z.real() <= re_max && z.imag() >= im_min && z.imag() <= im_max;
  }
};

struct Resonance {
  Complex zero;
  double mass = 0.0;   // Re Z
  double width = 0.0;  // -2 Im Z
};

struct ResonanceReport {
  std::vector<ScreenedPole> poles;
  std::vector<Complex> zeros;
  std::vector<Resonance> resonances;
};

/// Zeros inside the domain with Im Z < 0 that are not within axis_tol of a
/// spurious pole, sorted by mass.
ResonanceReport find_resonances(std::span<const Complex> zeros, std::span<const ScreenedPole> poles,
                                const ComplexDomain& domain, double axis_tol);

/// The zeros that fits to the even- and odd-indexed halves of the samples
/// both reproduce within tol. Zeros fitted to noise move between such fits;
/// zeros of the underlying function do not.
std::vector<Complex> resampled_zeros(std::span<const double> energies, std::span<const Complex> values,
                                     std::span<const Complex> zeros, double tol, const AaaOptions& options = {});

}  // namespace ccs
