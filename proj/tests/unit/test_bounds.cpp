#include <cmath>

#include "bounds.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace plunge;

namespace {

BoundInputs th3_example() {
  BoundInputs in;
  in.variant = Variant::th3;
  in.d = 2;
  in.bE = 8;
  in.kE = 0.5;
  in.bF = 4;
  in.kF = 1;
  in.eps = 0.01;
  in.alpha = 0.25;
  in.A = 1;
  return in;
}

}  // namespace

TEST_CASE("variant names round trip") {
  for (auto v : {Variant::th1, Variant::th2, Variant::th3, Variant::th_cube}) CHECK(parse_variant(variant_name(v)) == v);
  CHECK_THROWS_AS(parse_variant("th9"), Error);
}

TEST_CASE("theorem right-hand side example") {
  auto b = theorem_rhs(th3_example());
  CHECK(b.ok());
  CHECK(b.value == doctest::Approx(64.0 * std::pow(std::log(6400.0), 6)));
  CHECK(b.value == doctest::Approx(2.89e7).epsilon(0.01));

  auto in = th3_example();
  in.extra_log = false;
  CHECK(theorem_rhs(in).value == doctest::Approx(64.0 * std::pow(std::log(6400.0), 5)));
}

TEST_CASE("theorem right-hand side is monotone") {
  testsupport::Rng g(13);
  for (int trial = 0; trial < 200; ++trial) {
    BoundInputs in;
    in.variant = trial % 2 ? Variant::th2 : Variant::th1;
    in.d = int(g.integer(1, 3));
    in.bE = g.uniform(1, 100);
    in.bF = g.uniform(1, 100);
    in.kE = g.uniform(0.1, 2);
    in.kF = g.uniform(0.1, 2);
    in.eps = g.uniform(1e-4, 0.49);
    in.alpha = g.uniform(0.01, 0.49);
    const double base = theorem_rhs(in).value;
    CHECK(base > 0);

    auto up = in;
    up.bE *= g.uniform(1.01, 3);
    CHECK(theorem_rhs(up).value > base);
    up = in;
    up.eps *= g.uniform(0.1, 0.99);
    CHECK(theorem_rhs(up).value > base);
    up = in;
    up.kF *= g.uniform(0.1, 0.99);
    CHECK(theorem_rhs(up).value > base);
    up = in;
    up.alpha = g.uniform(in.alpha, 0.499);
    CHECK(theorem_rhs(up).value >= base);
    up = in;
    up.A *= 2;
    CHECK(theorem_rhs(up).value == doctest::Approx(2 * base));
  }
}

TEST_CASE("cube variant reduces when the scale factor is one") {
  BoundInputs in;
  in.variant = Variant::th_cube;
  in.d = 2;
  in.bE = 50;
  in.kE = 0.8;
  in.eta = 1;
  in.W_max = 1;
  in.eps = 0.05;
  in.alpha = 0.2;
  const double expect = (50 / 0.8) * std::pow(std::log(50 / (0.8 * 0.05)), 2 * 2 * 1.2);
  CHECK(theorem_rhs(in).value == doctest::Approx(expect));
  in.W_max = 0.7;
  CHECK(theorem_rhs(in).value == doctest::Approx(expect));
  in.W_max = 3;
  CHECK(theorem_rhs(in).value > expect);
  in.W_max = 1;
  in.eta = 0.25;
  CHECK(theorem_rhs(in).value > expect);
}

TEST_CASE("hypothesis violations") {
  auto in = th3_example();
  in.eps = 0.5;
  CHECK_THROWS_AS(theorem_rhs(in), Error);
  CHECK(std::isnan(theorem_rhs_checked(in).value));
  CHECK_FALSE(theorem_rhs_checked(in).eps_ok);

  in = th3_example();
  in.alpha = 0.5;
  CHECK_FALSE(theorem_rhs_checked(in).alpha_ok);
  CHECK_THROWS_AS(theorem_rhs(in), Error);

  in = th3_example();
  in.bE = 0.1;
  in.bF = 2;
  auto b = theorem_rhs_checked(in);
  CHECK_FALSE(b.product_ok);
  CHECK(std::isnan(b.value));
  try {
    theorem_rhs(in);
    FAIL("expected precondition");
  } catch (const Error& e) {
    CHECK(e.status() == Status::precondition);
  }
}

TEST_CASE("Landau-Widom examples") {
  CHECK(landau_widom(100, 0.5, 1.0) == doctest::Approx(0.0));
  CHECK(landau_widom(std::exp(1.0), 1 / (1 + std::exp(1.0)), 1.0) == doctest::Approx(1.0));
  CHECK(landau_widom(1e4, 0.01, 2.0) == doctest::Approx(2 * std::log(1e4) * std::log(99.0)));
  CHECK_THROWS_AS(landau_widom(0.5, 0.1, 1.0), Error);
  CHECK_THROWS_AS(landau_widom(10, 0.6, 1.0), Error);
}

TEST_CASE("scaling fits") {
  std::vector<double> r{1, 2, 4, 8, 16};
  SUBCASE("exact power law") {
    std::vector<double> y;
    for (double v : r) y.push_back(3 * v);
    auto f = fit_scaling(r, y, Model::power_law);
    CHECK(f.coef[1] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::exp(f.coef[0]) == doctest::Approx(3.0));
    CHECK(f.r2 == doctest::Approx(1.0));
  }
  SUBCASE("noisy power law") {
    testsupport::Rng g(101);
    std::vector<double> y;
    for (double v : r) y.push_back(v * (1 + 0.01 * g.uniform(-1, 1)));
    auto f = fit_scaling(r, y, Model::power_law);
    CHECK(f.coef[1] >= 0.95);
    CHECK(f.coef[1] <= 1.05);
  }
  SUBCASE("log linear") {
    std::vector<double> y;
    for (double v : r) y.push_back(2 + 0.5 * std::log(v));
    auto f = fit_scaling(r, y, Model::log_linear);
    CHECK(f.coef[0] == doctest::Approx(2.0));
    CHECK(f.coef[1] == doctest::Approx(0.5));
  }
  SUBCASE("ratio") {
    auto f = fit_scaling(r, {1, 3, 2, 4, 8}, Model::ratio);
    CHECK(f.coef[0] == doctest::Approx(1.5));
    for (double e : f.residuals) CHECK(e <= 1e-12);
  }
  CHECK_THROWS_AS(fit_scaling({1, 2, 3}, {1, 2, 3}, Model::power_law), Error);
  CHECK_THROWS_AS(fit_scaling({1, 1, 1, 1}, {1, 2, 3, 4}, Model::log_linear), Error);
  CHECK_THROWS_AS(fit_scaling({1, 2, 3, 4}, {1, 2, 3}, Model::ratio), Error);
}
