#include <algorithm>
#include <functional>
#include <limits>
#include <random>

#include "ccs/errors.hpp"
#include "ccs/rational.hpp"
#include "doctest.h"

using namespace ccs;

namespace {

struct Samples {
  std::vector<double> e;
  std::vector<Complex> f;
};

Samples sample(double a, double b, std::size_t n, const std::function<Complex(double)>& fn) {
  Samples s;
  for (std::size_t k = 0; k < n; ++k) {
    const double x = a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1);
    s.e.push_back(x);
    s.f.push_back(fn(x));
  }
  return s;
}

bool near_any(Complex z, const std::vector<Complex>& set, double tol) {
  return std::ranges::any_of(set, [&](Complex w) { return std::abs(w - z) <= tol; });
}

std::vector<Complex> positions(const PolesAndZeros& pz) {
  std::vector<Complex> out;
  for (const auto& p : pz.poles) out.push_back(p.position);
  return out;
}

}  // namespace

TEST_SUITE("rational") {

TEST_CASE("simple pole") {
  const auto s = sample(1.0, 3.0, 20, [](double x) { return Complex(1.0 / (x - 0.5)); });
  const auto fit = aaa_fit(s.e, s.f);
  CHECK(fit.converged);
  CHECK(fit.support.size() <= 3);
  CHECK(fit.max_error < 1e-13);
  const auto pz = poles_and_zeros(fit);
  REQUIRE(pz.poles.size() == 1);
  CHECK(std::abs(pz.poles[0].position - Complex(0.5)) < 1e-10);
  CHECK(std::abs(pz.poles[0].residue - Complex(1.0)) < 1e-9);
  CHECK(pz.zeros.empty());
}

TEST_CASE("pole and zero with unit residue") {
  const auto s = sample(2.5, 6.0, 20, [](double x) { return Complex((x - 1.0) / (x - 2.0)); });
  const auto pz = poles_and_zeros(aaa_fit(s.e, s.f));
  REQUIRE(pz.poles.size() == 1);
  REQUIRE(pz.zeros.size() == 1);
  CHECK(std::abs(pz.poles[0].position - Complex(2.0)) < 1e-10);
  CHECK(std::abs(pz.poles[0].residue - Complex(1.0)) < 1e-9);
  CHECK(std::abs(pz.zeros[0] - Complex(1.0)) < 1e-10);
}

TEST_CASE("constructed conjugate zero pair") {
  const Complex z1(2.0, -0.1);
  const Complex z2(2.0, 0.1);
  const auto fn = [&](double x) { return (x - z1) * (x - z2) / (x * x + 1.0); };
  const auto s = sample(0.0, 4.0, 60, fn);
  const auto fit = aaa_fit(s.e, s.f);
  CHECK(fit.converged);
  const auto pz = poles_and_zeros(fit);
  CHECK(near_any(z1, pz.zeros, 1e-6));
  CHECK(near_any(z2, pz.zeros, 1e-6));
  CHECK(near_any(Complex(0.0, 1.0), positions(pz), 1e-6));
  CHECK(near_any(Complex(0.0, -1.0), positions(pz), 1e-6));
  // extrapolation off the axis
  const Complex w(1.0, -0.5);
  CHECK(std::abs(fit(w) - (w - z1) * (w - z2) / (w * w + 1.0)) < 1e-8);

  ComplexDomain domain;
  domain.re_min = 0.0;
  domain.re_max = 4.0;
  const auto screened = screen_poles(pz.poles, std::vector<double>{}, ScreeningOptions{});
  const auto report = find_resonances(pz.zeros, screened, domain, 0.2);
  REQUIRE(report.resonances.size() == 1);
  CHECK(report.resonances[0].mass == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(report.resonances[0].width == doctest::Approx(0.2).epsilon(1e-5));
}

TEST_CASE("constant function") {
  const auto s = sample(0.0, 1.0, 10, [](double) { return Complex(1.0); });
  const auto fit = aaa_fit(s.e, s.f);
  CHECK(fit.converged);
  CHECK(fit.degree() == 0);
  const auto pz = poles_and_zeros(fit);
  CHECK(pz.poles.empty());
  CHECK(pz.zeros.empty());
}

TEST_CASE("interpolation and counting invariants") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Complex p1(u(rng) * 3.0, 0.5 + std::abs(u(rng)));
    const Complex p2(u(rng) * 3.0, -0.5 - std::abs(u(rng)));
    const Complex z1(u(rng) * 3.0, u(rng));
    const Complex a(u(rng), u(rng));
    const auto fn = [&](double x) { return a + (x - z1) / ((x - p1) * (x - p2)); };
    const auto s = sample(-3.0, 3.0, 80, fn);
    const auto fit = aaa_fit(s.e, s.f);
    for (std::size_t k = 0; k < fit.support.size(); ++k) CHECK(fit(Complex(fit.support[k])) == fit.values[k]);
    const auto pz = poles_and_zeros(fit);
    CHECK(pz.poles.size() <= fit.support.size() - 1);
    CHECK(pz.zeros.size() <= fit.support.size() - 1);
    CHECK(near_any(p1, positions(pz), 1e-6));
    CHECK(near_any(p2, positions(pz), 1e-6));
  }
}

TEST_CASE("degree cap reports non-convergence") {
  const auto s = sample(0.0, 1.0, 200, [](double x) { return Complex(std::exp(std::sin(40.0 * x))); });
  AaaOptions opts;
  opts.max_degree = 4;
  const auto fit = aaa_fit(s.e, s.f, opts);
  CHECK_FALSE(fit.converged);
  CHECK(fit.degree() == 4);
  CHECK(fit.max_error > opts.tolerance);
}

TEST_CASE("fit input errors") {
  const std::vector<double> e{0.0, 1.0, 2.0};
  const std::vector<Complex> f{1.0, 2.0, 3.0};
  CHECK_THROWS_AS(aaa_fit(e, f), InputError);
  const std::vector<double> dup{0.0, 1.0, 1.0, 2.0};
  const std::vector<Complex> f4{1.0, 2.0, 3.0, 4.0};
  CHECK_THROWS_AS(aaa_fit(dup, f4), InputError);
  const std::vector<double> e4{0.0, 1.0, 2.0, 3.0};
  const std::vector<Complex> bad{1.0, std::numeric_limits<double>::infinity(), 3.0, 4.0};
  CHECK_THROWS_AS(aaa_fit(e4, bad), InputError);
  CHECK_THROWS_AS(aaa_fit(e4, f), InputError);
}

TEST_CASE("pole screening") {
  std::vector<PoleResidue> poles{
      {Complex(67.0, 1e-9), Complex(0.4, 0.0)},
      {Complex(30.0, 1e-3), Complex(1e-10 * 0.4, 0.0)},
      {Complex(30.0, -1e-3), Complex(-1e-10 * 0.4, 0.0)},
      {Complex(40.0, 5.0), Complex(1.0, 0.0)},
      {Complex(12.0, 0.0), Complex(0.3, 0.1)},
      {Complex(50.0, 0.0), Complex(0.5, 0.0)},
  };
  const std::vector<double> estimates{66.97, 50.05};
  ScreeningOptions opts;
  opts.axis_tol = 0.2;
  opts.match_tol = 0.1;
  const auto s = screen_poles(poles, estimates, opts);
  REQUIRE(s.size() == poles.size());
  CHECK(label(s[0]) == "genuine");
  CHECK(label(s[1]) == "spurious");
  CHECK(label(s[2]) == "spurious");
  CHECK(label(s[3]) == "spurious");
  CHECK(label(s[4]) == "genuine-unmatched");
  CHECK(label(s[5]) == "genuine");

  SUBCASE("canceling pair with ordinary residues") {
    std::vector<PoleResidue> pair{{Complex(5.0, 0.01), Complex(0.7)}, {Complex(5.05, -0.01), Complex(-0.7)},
                                  {Complex(9.0), Complex(0.5)}};
    const auto sp = screen_poles(pair, std::vector<double>{9.0}, opts);
    CHECK(sp[0].classification == PoleClass::spurious);
    CHECK(sp[1].classification == PoleClass::spurious);
    CHECK(sp[2].classification == PoleClass::genuine);
  }
  SUBCASE("pole-zero doublets") {
    std::vector<PoleResidue> two{{Complex(3.0, 1e-11), Complex(1e-5)}, {Complex(7.0), Complex(2e-5)}};
    const std::vector<Complex> zeros{Complex(3.0, -1e-6), Complex(6.9, -0.02)};
    opts.doublet_tol = 1e-3;
    const auto sp = screen_poles(two, zeros, std::vector<double>{}, opts);
    CHECK(sp[0].classification == PoleClass::spurious);
    CHECK(sp[1].classification == PoleClass::genuine);
    opts.doublet_tol = 0.0;
    CHECK(screen_poles(two, zeros, std::vector<double>{}, opts)[0].classification == PoleClass::genuine);
  }
}

TEST_CASE("real-axis K-pole estimates") {
  std::vector<double> e;
  std::vector<double> g;
  std::vector<double> h;
  for (int k = 0; k <= 100; ++k) {
    const double x = 0.1 * k;
    e.push_back(x);
    g.push_back(0.4 / (3.33 - x) + 0.1);  // pole at 3.33
    h.push_back(x - 5.05);                // plain zero crossing
  }
  const auto poles = estimate_k_poles(e, g);
  REQUIRE(poles.size() == 1);
  CHECK(std::abs(poles[0] - 3.33) <= 0.1);
  CHECK(estimate_k_poles(e, h).empty());
  g[60] = std::numeric_limits<double>::infinity();
  const auto with_blowup = estimate_k_poles(e, g);
  CHECK(std::ranges::any_of(with_blowup, [](double x) { return x == 6.0; }));
  CHECK_THROWS_AS(estimate_k_poles(e, std::vector<double>{1.0}), InputError);
}

TEST_CASE("resonance selection") {
  ComplexDomain domain;
  domain.re_min = 0.0;
  domain.re_max = 10.0;
  domain.im_min = -5.0;
  std::vector<ScreenedPole> poles{{Complex(4.0, 0.001), Complex(1e-12), PoleClass::spurious, false},
                                  {Complex(8.0, 0.0), Complex(1.0), PoleClass::genuine, true}};
  const std::vector<Complex> zeros{Complex(7.9, -0.02), Complex(4.0, -0.05), Complex(2.0, 0.3),
                                   Complex(12.0, -0.1), Complex(1.0, -0.4)};
  const auto r = find_resonances(zeros, poles, domain, 0.2);
  REQUIRE(r.resonances.size() == 2);
  CHECK(r.resonances[0].mass == 1.0);
  CHECK(r.resonances[0].width == doctest::Approx(0.8));
  CHECK(r.resonances[1].mass == 7.9);
  CHECK(r.resonances[1].width == doctest::Approx(0.04));
  CHECK(find_resonances(std::vector<Complex>{Complex(3.0, 0.5)}, poles, domain, 0.2).resonances.empty());
}

TEST_CASE("resampled zeros") {
  const Complex z0(5.0, -0.3);
  const Complex p0(6.0, 0.5);
  auto fn = [&](double x) { return (x - z0) / (x - p0); };
  const auto clean = sample(0.0, 10.0, 101, fn);
  const auto pz = poles_and_zeros(aaa_fit(clean.e, clean.f));
  REQUIRE(near_any(z0, pz.zeros, 1e-8));
  std::vector<Complex> candidates = pz.zeros;
  candidates.emplace_back(3.0, -2.0);
  const auto kept = resampled_zeros(clean.e, clean.f, candidates, 0.1);
  CHECK(near_any(z0, kept, 1e-8));
  CHECK_FALSE(near_any(Complex(3.0, -2.0), kept, 0.5));

  // Noise makes the fit place extra zeros that move between the halves.
  std::mt19937_64 rng(7);
  std::normal_distribution<double> noise(0.0, 1e-5);
  auto noisy = sample(0.0, 10.0, 201, fn);
  for (auto& f : noisy.f) f += Complex(noise(rng), noise(rng));
  AaaOptions tight;
  tight.tolerance = 1e-12;
  tight.max_degree = 60;
  const auto npz = poles_and_zeros(aaa_fit(noisy.e, noisy.f, tight));
  REQUIRE(npz.zeros.size() > 5);
  const auto stable = resampled_zeros(noisy.e, noisy.f, npz.zeros, 0.1, tight);
  CHECK(near_any(z0, stable, 1e-3));
  CHECK(stable.size() < npz.zeros.size());

  CHECK_THROWS_AS(resampled_zeros(clean.e, std::vector<Complex>{1.0}, candidates, 0.1), InputError);
}

}
