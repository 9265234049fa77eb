#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "operator.hpp"
#include "parse.hpp"
#include "spectrum.hpp"
#include "support.hpp"

using namespace plunge;

namespace {

const double kInvPi = 1.0 / kPi;

DomainPtr interval(double lo, double hi) { return Domain::box(Box{{lo}, {hi}}); }

GridSet line(std::vector<Index> k, double L = 1.0) { return GridSet(1, L, std::move(k)); }

double ft1(const DomainPtr& F, double xi) { return ft_indicator(*F, &xi).real(); }

void check_spectra_close(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= tol);
}

}  // namespace

TEST_CASE("indicator transform examples") {
  CHECK(ft1(interval(-0.5, 0.5), 0.0) == doctest::Approx(1.0));
  CHECK(std::abs(ft1(interval(-0.5, 0.5), 1.0)) < 1e-15);
  CHECK(ft1(interval(-0.25, 0.25), 1.0) == doctest::Approx(kInvPi).epsilon(1e-14));

  // Shifted interval picks up a phase, modulus unchanged.
  const double xi = 0.7;
  auto a = ft_indicator(*interval(-0.25, 0.25), &xi);
  auto b = ft_indicator(*interval(0.05, 0.55), &xi);
  CHECK(std::abs(a) == doctest::Approx(std::abs(b)));

  // Disk transform at zero is the area.
  const double z[2] = {0, 0};
  CHECK(ft_indicator(*Domain::ball(2, 0.3), z).real() == doctest::Approx(kPi * 0.09));
}

TEST_CASE("closed-form transforms match rasterized integration") {
  std::vector<DomainPtr> shapes{Domain::ball(2, 0.35), Domain::annulus(2, 0.1, 0.4), Domain::l_shape(0.8, 0.3),
                                Domain::box_minus_ball(2, 0.8, 0.2),
                                parse_domain("union(shift(box(0.2,0.2),-0.2,0);shift(box(0.2,0.3),0.15,0.1))")};
  testsupport::Rng g(21);
  for (const auto& F : shapes) {
    REQUIRE(F->has_exact_transform());
    IndicatorTransform raster(F, 0.0025);
    for (int t = 0; t < 6; ++t) {
      const double xi[2] = {g.uniform(-3, 3), g.uniform(-3, 3)};
      CHECK(std::abs(ft_indicator(*F, xi) - raster(xi)) < 2e-3);
    }
  }
}

TEST_CASE("assemble examples") {
  auto one = assemble(line({0}), interval(-0.5, 0.5));
  REQUIRE(one.n == 1);
  CHECK(one(0, 0).real() == doctest::Approx(1.0));

  auto two = assemble(line({0, 1}), interval(-0.25, 0.25));
  CHECK(two(0, 0).real() == doctest::Approx(0.5));
  CHECK(two(1, 1).real() == doctest::Approx(0.5));
  CHECK(two(0, 1).real() == doctest::Approx(kInvPi));
  CHECK(two(1, 0).real() == doctest::Approx(kInvPi));
  CHECK(two.real);

  auto id = assemble(line({0, 1}), interval(-0.5, 0.5));
  CHECK(id(0, 0).real() == doctest::Approx(1.0));
  CHECK(std::abs(id(0, 1)) < 1e-15);
}

TEST_CASE("trace statistics examples") {
  auto id = assemble(line({0, 1}), interval(-0.5, 0.5));
  auto t = trace_stats(id);
  CHECK(t.trace == doctest::Approx(2.0));
  CHECK(t.trace_sq == doctest::Approx(2.0));

  auto two = trace_stats(assemble(line({0, 1}), interval(-0.25, 0.25)));
  CHECK(two.trace == doctest::Approx(1.0));
  CHECK(two.trace_sq == doctest::Approx(0.5 + 2.0 / (kPi * kPi)));

  // Diagonal entries are |F| whatever the geometry of omega.
  auto scattered = trace_stats(assemble(line({-7, 0, 2, 3, 11}), interval(-0.125, 0.125)));
  CHECK(scattered.trace == doctest::Approx(1.25));
}

TEST_CASE("trace equals #omega |F| L^-d in higher dimension") {
  testsupport::Rng g(8);
  for (int trial = 0; trial < 8; ++trial) {
    const double L = double(g.integer(2, 4));
    auto omega = discretize(*Domain::ball(2, g.uniform(1.0, 2.5)), L);
    auto F = Domain::ball(2, g.uniform(0.1, 0.45));
    auto t = trace_stats(assemble(omega, F));
    CHECK(t.trace == doctest::Approx(double(omega.size()) * *F->volume() / (L * L)).epsilon(1e-12));
    CHECK(t.trace_sq <= t.trace + 1e-12);
  }
}

TEST_CASE("Nystrom oracle examples") {
  auto top1 = nystrom_oracle(line({0}), *interval(-0.5, 0.5), 64);
  CHECK(top1[0] == doctest::Approx(1.0).epsilon(1e-6));

  auto n2 = nystrom_oracle(line({0, 1}), *interval(-0.25, 0.25), 512);
  REQUIRE(n2.size() == 2);
  CHECK(std::abs(n2[0] - (0.5 + kInvPi)) < 1e-3);
  CHECK(std::abs(n2[1] - (0.5 - kInvPi)) < 1e-3);

  std::vector<Index> blk;
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j) blk.insert(blk.end(), {i, j});
  GridSet omega(2, 1.0, blk);
  auto F = Domain::box({1.0, 1.0});
  auto ny = nystrom_oracle(omega, *F, 64);
  auto ex = eigenvalues(assemble(omega, F)).lambda;
  check_spectra_close(ny, ex, 1e-3);

  CHECK_THROWS_AS(nystrom_oracle(omega, *F, 100), Error);
}

TEST_CASE("spectrum is monotone in F and in omega") {
  testsupport::Rng g(17);
  for (int trial = 0; trial < 10; ++trial) {
    const double L = 4;
    const double r = g.uniform(1.0, 2.0);
    auto omega = discretize(*Domain::ball(2, r), L);
    auto big = discretize(*Domain::ball(2, r + g.uniform(0.3, 1.0)), L);
    const double f = g.uniform(0.4, 1.5);
    auto F = Domain::box({f, f});
    auto F2 = Domain::box({f + g.uniform(0.1, 1.0), f + 0.2});

    auto a = eigenvalues(assemble(omega, F)).lambda;
    auto b = eigenvalues(assemble(omega, F2)).lambda;
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] <= b[i] + 1e-10);

    auto c = eigenvalues(assemble(big, F)).lambda;
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] <= c[i] + 1e-10);
  }
}

TEST_CASE("spectrum is invariant under shifts of omega and F") {
  testsupport::Rng g(23);
  for (int trial = 0; trial < 6; ++trial) {
    const double L = 3;
    auto omega = discretize(*Domain::l_shape(g.uniform(2.0, 4.0), 1.0), L);
    auto shifted = omega.translated({g.integer(-9, 9), g.integer(-9, 9)});
    auto F = Domain::ball(2, g.uniform(0.2, 0.6));
    auto Fs = Domain::shift(F, {g.uniform(-0.7, 0.7), g.uniform(-0.7, 0.7)});
    auto base = eigenvalues(assemble(omega, F)).lambda;
    check_spectra_close(base, eigenvalues(assemble(shifted, F)).lambda, 1e-10);
    auto m = assemble(omega, Fs);
    CHECK_FALSE(m.real);
    check_spectra_close(base, eigenvalues(m).lambda, 1e-10);
  }
}

TEST_CASE("matrix is Hermitian") {
  auto omega = discretize(*Domain::ball(2, 1.5), 2.0);
  auto m = assemble(omega, Domain::shift(Domain::l_shape(0.8, 0.3), {0.3, -0.2}));
  for (std::size_t i = 0; i < m.n; ++i)
    for (std::size_t j = 0; j < m.n; ++j) CHECK(std::abs(m(i, j) - std::conj(m(j, i))) < 1e-15);
}

TEST_CASE("assemble guards") {
  auto omega = discretize(*Domain::box({2.0, 2.0}), 1.0);
  SUBCASE("domain outside the fundamental cell") {
    CHECK_THROWS_AS(assemble(omega, Domain::box({1.5, 0.5})), Error);
  }
  SUBCASE("cap") {
    AssembleOptions opt;
    opt.cap = 4;
    try {
      assemble(omega, Domain::box({0.5, 0.5}), opt);
      FAIL("expected cap error");
    } catch (const Error& e) {
      CHECK(e.status() == Status::cap_exceeded);
    }
  }
  SUBCASE("predicate domains need raster mode") {
    auto pred = Domain::predicate(
        2, [](const double* x) { return x[0] * x[0] + 4 * x[1] * x[1] <= 0.09; }, Box{{-0.3, -0.15}, {0.3, 0.15}});
    try {
      assemble(omega, pred);
      FAIL("expected unsupported");
    } catch (const Error& e) {
      CHECK(e.status() == Status::unsupported);
    }
  }
  CHECK_THROWS_AS(assemble(GridSet(2, 1.0, {}), Domain::box({0.5, 0.5})), Error);
  CHECK_THROWS_AS(assemble(omega, interval(-0.2, 0.2)), Error);
}

TEST_CASE("raster mode approximates the exact spectrum") {
  auto omega = discretize(*Domain::ball(2, 1.5), 2.0);
  auto exact = Domain::ball(2, 0.4);
  auto pred = Domain::predicate(
      2, [](const double* x) { return x[0] * x[0] + x[1] * x[1] <= 0.16; }, Box{{-0.4, -0.4}, {0.4, 0.4}});
  AssembleOptions opt;
  opt.allow_raster = true;
  opt.raster_cell = 0.002;
  auto m = assemble(omega, pred, opt);
  CHECK_FALSE(m.exact);
  check_spectra_close(eigenvalues(m).lambda, eigenvalues(assemble(omega, exact)).lambda, 5e-3);
}

TEST_CASE("parity blocks reproduce the full spectrum") {
  struct Case {
    DomainPtr E, F;
    double L;
  };
  const Case cases[] = {{Domain::ball(2, 2.0), Domain::box({0.7, 0.4}), 3},
                        {Domain::box({4.0}), interval(-0.3, 0.3), 4},
                        {Domain::annulus(2, 0.5, 1.5), Domain::ball(2, 0.4), 4},
                        {Domain::box({1.0, 1.5, 1.0}), Domain::ball(3, 0.4), 2}};
  for (const auto& c : cases) {
    auto omega = discretize(*c.E, c.L);
    REQUIRE(reflection_symmetric(omega, *c.F));
    auto blocks = assemble_parity_blocks(omega, c.F);
    CHECK(blocks.total == omega.size());
    auto a = eigenvalues(blocks);
    auto b = eigenvalues(assemble(omega, c.F));
    check_spectra_close(a.lambda, b.lambda, 1e-11);
    CHECK(a.trace == doctest::Approx(b.trace));
  }
  auto asym = discretize(*Domain::l_shape(2.0, 1.0), 2);
  CHECK_FALSE(reflection_symmetric(asym, *Domain::box({0.5, 0.5})));
}

TEST_CASE("matrix csv") {
  auto csv = matrix_csv(assemble(line({0, 1}), interval(-0.25, 0.25)));
  CHECK(std::count(csv.begin(), csv.end(), '\n') >= 2);
  CHECK(csv.find("0.5") != std::string::npos);
}
