#include <cmath>

#include "doctest.h"
#include "parse.hpp"
#include "spectrum.hpp"
#include "support.hpp"

using namespace plunge;

namespace {

const double kInvPi = 1.0 / kPi;
const std::vector<double> kTwo{0.5 + kInvPi, 0.5 - kInvPi};

}  // namespace

TEST_CASE("eigenvalue examples") {
  auto id = eigenvalues(assemble(GridSet(1, 1.0, {0, 1}), Domain::box({1.0})));
  REQUIRE(id.lambda.size() == 2);
  CHECK(id.lambda[0] == doctest::Approx(1.0));
  CHECK(id.lambda[1] == doctest::Approx(1.0));

  auto two = eigenvalues(assemble(GridSet(1, 1.0, {0, 1}), Domain::box({0.5})));
  CHECK(two.lambda[0] == doctest::Approx(kTwo[0]).epsilon(1e-13));
  CHECK(two.lambda[1] == doctest::Approx(kTwo[1]).epsilon(1e-13));
  CHECK(two.trace == doctest::Approx(1.0));
  CHECK(two.trace_residual == doctest::Approx(2 * kTwo[0] * kTwo[1]));
}

TEST_CASE("plunge and distribution count examples") {
  auto a = summary_from({1, 1, 0.5, 0});
  CHECK(plunge_count(a, 0.2) == 1);
  auto two = summary_from(kTwo);
  CHECK(plunge_count(two, 0.1) == 2);
  CHECK(plunge_count(two, 0.25) == 0);

  CHECK(distribution_count(summary_from({1, 0.5, 0}), 0.4) == 2);
  CHECK(distribution_count(two, 0.5) == 1);

  CHECK_THROWS_AS(plunge_count(two, 0.5), Error);
  CHECK_THROWS_AS(plunge_count(two, 0.0), Error);
  CHECK_THROWS_AS(distribution_count(two, 1.0), Error);
}

TEST_CASE("distribution counts differ by the plunge count") {
  testsupport::Rng g(31);
  for (int trial = 0; trial < 200; ++trial) {
    auto s = summary_from(testsupport::random_spectrum(g, std::size_t(g.integer(1, 80))));
    const double eps = g.uniform(1e-4, 0.4999);
    CHECK(distribution_count(s, eps) - distribution_count(s, 1 - eps) == plunge_count(s, eps));
  }
}

TEST_CASE("counts are monotone in the threshold") {
  testsupport::Rng g(37);
  for (int trial = 0; trial < 100; ++trial) {
    auto s = summary_from(testsupport::random_spectrum(g, 50));
    const double e1 = g.uniform(1e-4, 0.49), e2 = g.uniform(e1, 0.4999);
    CHECK(plunge_count(s, e2) <= plunge_count(s, e1));
    CHECK(distribution_count(s, e2) <= distribution_count(s, e1));
  }
}

TEST_CASE("Schatten residual examples") {
  auto proj = summary_from({1, 1, 0, 0});
  for (double p : {0.1, 0.5, 1.0}) CHECK(schatten_residual(proj, p) == 0.0);
  CHECK(schatten_residual(summary_from({0.5}), 1.0) == doctest::Approx(0.25));
  CHECK(schatten_residual(summary_from(kTwo), 0.5) == doctest::Approx(2 * std::sqrt(kTwo[0] * kTwo[1])));
  CHECK(schatten_residual(summary_from(kTwo), 0.5) == doctest::Approx(0.7712).epsilon(1e-4));
  CHECK_THROWS_AS(schatten_residual(proj, 0.0), Error);
  CHECK_THROWS_AS(schatten_residual(proj, 1.5), Error);
}

TEST_CASE("Schatten plunge bound examples") {
  auto b0 = schatten_plunge_bound(summary_from({1, 1, 0, 0}), 0.1, 0.5);
  CHECK(b0.bound == 0.0);
  CHECK(b0.count == 0);
  CHECK(b0.holds);

  auto b1 = schatten_plunge_bound(summary_from({0.5}), 0.25, 1.0);
  CHECK(b1.bound == doctest::Approx(4.0 / 3.0));
  CHECK(b1.count == 1);
  CHECK(b1.holds);
}

TEST_CASE("Schatten transfer examples") {
  CHECK(schatten_transfer(1, 0, 1, 1) == doctest::Approx(1.0));
  CHECK(schatten_transfer(2, 3, 2, 0.5) == doctest::Approx(50.0));
  CHECK_THROWS_AS(schatten_transfer(0, 1, 1, 1), Error);
}

TEST_CASE("transition examples") {
  auto t = transition_check(summary_from({1, 1, 1, 0, 0}));
  CHECK(t.upper_ok);
  CHECK(t.lower_ok);
  CHECK(t.K == 3);
  CHECK(t.width == 1.0);

  auto two = summary_from(kTwo);
  CHECK(two.trace_residual == doctest::Approx(0.2973).epsilon(1e-3));
  auto t2 = transition_check(two);
  CHECK(t2.K == 1);
  CHECK(t2.width == 1.0);
  CHECK(t2.upper_ok);
  CHECK(t2.lower_ok);
}

TEST_CASE("deviation examples") {
  auto d = deviation_check(summary_from({1, 1, 1, 0, 0, 0}), 0.5);
  CHECK(d.deviation == 0.0);
  CHECK(d.holds);
  auto d2 = deviation_check(summary_from(kTwo), 0.5);
  CHECK(d2.deviation == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(d2.holds);
}

TEST_CASE("exact inequalities hold on random spectra") {
  testsupport::Rng g(41);
  for (int trial = 0; trial < 300; ++trial) {
    auto s = summary_from(testsupport::random_spectrum(g, std::size_t(g.integer(1, 120))));
    CHECK(audit(s) == "");
    for (double p : {0.1, 0.25, 0.5, 1.0}) CHECK(schatten_plunge_bound(s, g.uniform(1e-3, 0.49), p).holds);
  }
}

TEST_CASE("exact inequalities hold on computed spectra") {
  struct Case {
    const char *E, *F;
    double L;
    int d;
  };
  const Case cases[] = {{"box(6)", "box(0.5)", 4, 1},           {"ball(2)", "ball(0.4)", 3, 2},
                        {"lshape(3,1)", "box(0.8,0.5)", 2, 2},   {"annulus(1,2)", "squareminusdisk(0.9,0.2)", 2, 2},
                        {"box(1.5,1,1)", "ball(0.4)", 2, 3},     {"ball(3)", "box(1)", 2, 2}};
  for (const auto& c : cases) {
    auto omega = discretize(*parse_domain(c.E, c.d), c.L);
    auto s = spectrum_of(omega, parse_domain(c.F, c.d));
    CHECK(audit(s) == "");
    CHECK(s.trace == doctest::Approx(double(omega.size()) * *parse_domain(c.F, c.d)->volume() / std::pow(c.L, c.d)));
    for (double v : s.lambda) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("spectrum csv lists every eigenvalue") {
  auto csv = spectrum_csv(summary_from(kTwo));
  CHECK(csv.rfind("index,lambda\n", 0) == 0);
  CHECK(csv.find("\n2,") != std::string::npos);
}
