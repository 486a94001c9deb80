#include <cmath>
#include <fstream>
#include <limits>

#include "ccs/errors.hpp"
#include "ccs/io_model.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace ccs;

TEST_SUITE("io_model") {

TEST_CASE("two-channel table parses in file order") {
  const auto t = parse_channels("l,mu,threshold\n1,1000,0\n0,1000,100\n");
  REQUIRE(t.size() == 2);
  CHECK(t[0].l == 1);
  CHECK(t[0].mu == 1000.0);
  CHECK(t[0].threshold == 0.0);
  CHECK(t[1].l == 0);
  CHECK(t[1].mu == 1000.0);
  CHECK(t[1].threshold == 100.0);
  CHECK(t.min_threshold() == 0.0);
}

TEST_CASE("inf threshold marks a confining channel") {
  for (const char* tok : {"inf", "INF", "+inf", "Infinity", "infinity"}) {
    const auto t = parse_channels(std::string("l,mu,threshold\n0,500,") + tok + "\n");
    REQUIRE(t.size() == 1);
    CHECK(std::isinf(t[0].threshold));
    CHECK(t[0].threshold > 0);
    CHECK(t[0].confining());
  }
  const auto t = parse_channels("l,mu,threshold\n0,500,inf\n2,1,3\n");
  CHECK(t.min_finite_threshold() == 3.0);
}

TEST_CASE("column order is irrelevant") {
  const auto a = parse_channels("l,mu,threshold\n1,1000,0\n0,1000,100\n");
  const auto b = parse_channels("mu,threshold,l\n1000,0,1\n1000,100,0\n");
  const auto c = parse_channels("threshold,l,mu\n0,1,1000\n100,0,1000\n");
  for (const auto* other : {&b, &c}) {
    REQUIRE(other->size() == a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK((*other)[i].l == a[i].l);
      CHECK((*other)[i].mu == a[i].mu);
      CHECK((*other)[i].threshold == a[i].threshold);
    }
  }
}

TEST_CASE("extra columns are carried along") {
  const auto t = parse_channels("name,l,mu,threshold,s\npp,1,1000,0,1\nnn,0,1000,100,0\n");
  CHECK(t.extra_columns == std::vector<std::string>{"name", "s"});
  CHECK(t[0].extra.at("name") == "pp");
  CHECK(t[1].extra.at("s") == "0");
  CHECK_FALSE(t.spins().has_value());
}

TEST_CASE("spin columns") {
  const auto t = parse_channels("l,mu,threshold,Jalpha,Jbeta\n0,1,0,1/2,1/2\n0,1,1,1,0\n");
  const auto s = t.spins();
  REQUIRE(s.has_value());
  CHECK((*s)[0].j_alpha == 0.5);
  CHECK((*s)[0].j_beta == 0.5);
  CHECK((*s)[1].j_alpha == 1.0);
  CHECK_THROWS_AS(parse_channels("l,mu,threshold,Jalpha\n0,1,0,1\n").spins(), InputError);
}

TEST_CASE("channel table errors name line and column") {
  CHECK_THROWS_WITH_AS(parse_channels("l,mu\n0,1\n"), doctest::Contains("missing required column 'threshold'"),
                       InputError);
  CHECK_THROWS_WITH_AS(parse_channels("l,mu,threshold\n0,1,0\n1.5,1,0\n"),
                       doctest::Contains("line 3, column 'l'"), InputError);
  CHECK_THROWS_WITH_AS(parse_channels("l,mu,threshold\n0,-1,0\n"), doctest::Contains("column 'mu'"), InputError);
  CHECK_THROWS_WITH_AS(parse_channels("l,mu,threshold\n0,0,0\n"), doctest::Contains("column 'mu'"), InputError);
  CHECK_THROWS_WITH_AS(parse_channels("l,mu,threshold\n0,1,abc\n"), doctest::Contains("line 2, column 'threshold'"),
                       InputError);
  CHECK_THROWS_AS(parse_channels("l,mu,threshold\n-1,1,0\n"), InputError);
  CHECK_THROWS_AS(parse_channels("l,mu,threshold\n0,1,nan\n"), InputError);
  CHECK_THROWS_AS(parse_channels("l,mu,threshold\n"), InputError);
  CHECK_THROWS_AS(parse_channels("l,mu,threshold\n0,1\n"), InputError);
  CHECK_THROWS_AS(load_channels("/nonexistent/channels.csv"), InputError);
}

TEST_CASE("constant potential grid") {
  const auto g = parse_potential("1e-6,0,0,0,100\n2e-6,0,0,0,100\n3e-6,0,0,0,100\n", 2);
  CHECK(g.n_nodes() == 3);
  CHECK(g.n_channels() == 2);
  CHECK(g.step() == 1e-6);
  CHECK(g.radius() == doctest::Approx(4e-6));
  for (std::size_t n = 0; n < 3; ++n) {
    CHECK(g(n, 0, 0) == 0.0);
    CHECK(g(n, 0, 1) == 0.0);
    CHECK(g(n, 1, 0) == 0.0);
    CHECK(g(n, 1, 1) == 100.0);
  }
}

TEST_CASE("potential is unflattened row-major") {
  const auto g = parse_potential("0.5,1,2,3,4\n1.0,5,6,7,8\n", 2);
  CHECK(g(0, 0, 1) == 2.0);
  CHECK(g(0, 1, 0) == 3.0);
  CHECK(g(1, 1, 1) == 8.0);
}

TEST_CASE("potential grid errors") {
  CHECK_THROWS_WITH_AS(parse_potential("1,0,0,0,100\n2,0,0,0,100,7\n", 2), doctest::Contains("line 2"), InputError);
  CHECK_THROWS_AS(parse_potential("1,0\n3,0\n", 1), InputError);          // non-uniform
  CHECK_THROWS_AS(parse_potential("1,0\n2,0\n2,0\n", 1), InputError);     // not increasing
  CHECK_THROWS_AS(parse_potential("2,0\n1,0\n", 1), InputError);          // decreasing
  CHECK_THROWS_AS(parse_potential("0,0\n1,0\n", 1), InputError);          // r = 0 stored
  CHECK_THROWS_AS(parse_potential("1,0\n2,x\n", 1), InputError);
  CHECK_THROWS_AS(parse_potential("1,inf\n2,0\n", 1), InputError);
  CHECK_THROWS_AS(parse_potential("", 1), InputError);
  // within the relative uniformity tolerance
  CHECK_NOTHROW(parse_potential("0.1,0\n0.2,0\n0.30000000000000004,0\n", 1));
}

TEST_CASE("write and reload round-trips bit for bit") {
  test::TempDir dir;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  const auto g = test::sampled_grid(3, 1e-3, 50, [&](double) {
    std::vector<double> v(9);
    for (auto& x : v) x = u(rng);
    return v;
  });
  ChannelTable t;
  t.channels.push_back({2, 931.494, 0.1, {}});
  t.channels.push_back({0, 1.0 / 3.0, std::numeric_limits<double>::infinity(), {}});
  t.channels.push_back({5, 1e-7, -2.5e-9, {}});
  write_channels(dir.path() / "channels.csv", t);
  write_potential(dir.path() / "potential.csv", g);
  const auto t2 = load_channels(dir.path() / "channels.csv");
  const auto g2 = load_potential(dir.path() / "potential.csv", 3);
  REQUIRE(t2.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(t2[i].l == t[i].l);
    CHECK(t2[i].mu == t[i].mu);
    CHECK(t2[i].threshold == t[i].threshold);
  }
  REQUIRE(g2.n_nodes() == g.n_nodes());
  for (std::size_t k = 0; k < g.values().size(); ++k) CHECK(g2.values()[k] == g.values()[k]);
  for (std::size_t n = 0; n < g.n_nodes(); ++n) CHECK(g2.nodes()[n] == g.nodes()[n]);
}

TEST_CASE("numerical range") {
  SUBCASE("zero potential at zero thresholds") {
    const auto t = test::single_channel(0, 1.0);
    const auto g = test::sampled_grid(1, 0.01, 100, [](double) { return std::vector<double>{0.0}; });
    CHECK(numerical_range(g, t, 1e-8) == 0.0);
  }
  SUBCASE("exponential tail") {
    const auto t = test::single_channel(0, 1.0);
    const double d = 1e-3;
    const auto g = test::sampled_grid(1, d, 20000, [](double r) { return std::vector<double>{100.0 * std::exp(-r)}; });
    const double exact = std::log(100.0 / 1e-3);
    const double rv = numerical_range(g, t, 1e-3);
    CHECK(rv <= exact);
    CHECK(rv > exact - d);
    CHECK(rv == doctest::Approx(11.5).epsilon(0.01));
  }
  SUBCASE("threshold offsets do not count, confining channels are ignored") {
    ChannelTable t;
    t.channels.push_back({0, 1.0, 5.0, {}});
    t.channels.push_back({0, 1.0, std::numeric_limits<double>::infinity(), {}});
    const auto g = test::sampled_grid(2, 0.1, 50, [](double r) {
      return std::vector<double>{5.0 + (r < 1.0 ? 1.0 : 0.0), 0.0, 0.0, 1e6};
    });
    CHECK(numerical_range(g, t, 1e-8) == doctest::Approx(0.9));
  }
  SUBCASE("monotone non-increasing in epsilon") {
    const auto t = test::single_channel(0, 1.0);
    const auto g = test::sampled_grid(1, 1e-3, 5000, [](double r) { return std::vector<double>{std::exp(-r * r)}; });
    double prev = std::numeric_limits<double>::infinity();
    for (double eps = 1e-12; eps < 1.0; eps *= 3.0) {
      const double rv = numerical_range(g, t, eps);
      CHECK(rv <= prev);
      prev = rv;
    }
  }
  SUBCASE("epsilon must be positive") {
    const auto t = test::single_channel(0, 1.0);
    const auto g = test::sampled_grid(1, 0.1, 5, [](double) { return std::vector<double>{0.0}; });
    CHECK_THROWS_AS(numerical_range(g, t, 0.0), InputError);
  }
}

TEST_CASE("parse_real") {
  CHECK(parse_real("1.5") == 1.5);
  CHECK(parse_real("+2e3") == 2000.0);
  CHECK(parse_real(" 7 ") == 7.0);
  CHECK(std::isinf(*parse_real("Inf")));
  CHECK(*parse_real("-inf") < 0);
  CHECK_FALSE(parse_real("nan").has_value());
  CHECK_FALSE(parse_real("1.5x").has_value());
  CHECK_FALSE(parse_real("").has_value());
}

}
