#include <cstdlib>
#include <sstream>

#include "doctest.h"
#include "harness.hpp"
#include "json.hpp"
#include "support.hpp"

using namespace plunge;

namespace {

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

SweepConfig small_config() {
  SweepConfig c;
  c.E = {"box(2,2)"};
  c.F = {"box(1,1)"};
  c.L = {1};
  c.eps = {0.1};
  return c;
}

}  // namespace

TEST_CASE("catalog examples") {
  CHECK(*catalog("box", {2, 3})->volume() == doctest::Approx(6));
  CHECK(*catalog("box", {2}, 3)->volume() == doctest::Approx(8));
  CHECK(*catalog("ball", {1}, 3)->volume() == doctest::Approx(4 * kPi / 3));
  CHECK(*catalog("annulus", {1, 2})->boundary_measure() == doctest::Approx(6 * kPi));
  CHECK(*catalog("squareminusdisk", {4, 1})->volume() == doctest::Approx(16 - kPi));
  CHECK(*catalog("lshape", {4, 2})->volume() == doctest::Approx(12));
  CHECK(*catalog("twobox", {1, 2})->volume() == doctest::Approx(2));
  CHECK_THROWS_AS(catalog("twobox", {2, 0.5}), Error);
  CHECK_THROWS_AS(catalog("heart", {1}), Error);
  CHECK_THROWS_AS(catalog("ball", {1, 2}), Error);
}

TEST_CASE("single combination sweep") {
  auto res = run_sweep(small_config());
  REQUIRE(res.records.size() == 1);
  const auto& r = res.records[0];
  CHECK(r.error == "");
  CHECK(r.n_omega == 9);
  CHECK(r.n_boundary == 8);
  CHECK(r.kappa_omega == doctest::Approx(0.5));
  CHECK(r.trace == doctest::Approx(9.0));
  CHECK(r.plunge == 0);
  CHECK(r.distribution == 9);
  CHECK(r.transition_upper);
  CHECK(r.transition_lower);
  CHECK(r.schatten_ok);
  CHECK(r.deviation_ok);
  CHECK(r.bE == doctest::Approx(8));
  CHECK(r.bF == doctest::Approx(4));
  CHECK(r.rhs_th2 > 0);
  CHECK(r.rhs_th3 > 0);
}

TEST_CASE("three by three sweep") {
  SweepConfig c;
  c.E = {"ball(2)", "box(3,2)", "lshape(3,1)"};
  c.F = {"ball(0.4)", "box(0.5,0.8)", "squareminusdisk(0.9,0.2)"};
  c.L = {2};
  c.eps = {0.1, 0.01};
  auto res = run_sweep(c);
  CHECK(res.records.size() == 18);
  for (const auto& r : res.records) {
    CHECK(r.error == "");
    CHECK(r.transition_upper);
    CHECK(r.transition_lower);
    CHECK(r.schatten_ok);
    CHECK(r.deviation_ok);
    CHECK(r.plunge >= 0);
  }
  for (std::size_t i = 1; i < res.records.size(); ++i) CHECK(res.records[i - 1].key() < res.records[i].key());
}

TEST_CASE("sweep validation") {
  auto c = small_config();
  c.eps = {};
  CHECK_THROWS_AS(run_sweep(c), Error);
  c = small_config();
  c.eps = {0.5};
  CHECK_THROWS_AS(validate(c), Error);
  c = small_config();
  c.L = {0};
  CHECK_THROWS_AS(validate(c), Error);
  c = small_config();
  c.alpha = 0.5;
  CHECK_THROWS_AS(validate(c), Error);
  c = small_config();
  c.d = 4;
  CHECK_THROWS_AS(validate(c), Error);
  CHECK_NOTHROW(validate(small_config()));
}

TEST_CASE("duplicate combinations warn once") {
  auto c = small_config();
  c.E = {"box(2,2)", "BOX(2, 2)"};
  auto res = run_sweep(c);
  CHECK(res.records.size() == 1);
  REQUIRE(res.warnings.size() == 1);
  CHECK(res.warnings[0].find("duplicate") != std::string::npos);
}

TEST_CASE("failing combinations become error records") {
  auto c = small_config();
  c.F = {"box(1,1)", "box(3,3)"};
  c.eps = {0.1, 0.2};
  auto res = run_sweep(c);
  REQUIRE(res.records.size() == 4);
  std::size_t errors = 0;
  for (const auto& r : res.records) errors += !r.error.empty();
  CHECK(errors == 2);
}

TEST_CASE("sweep output does not depend on thread count") {
  SweepConfig c;
  c.E = {"ball(2)", "box(3,2)", "annulus(1,2)"};
  c.F = {"ball(0.4)", "box(0.5,0.8)"};
  c.L = {2, 3};
  c.eps = {0.1};
  c.threads = 1;
  const auto one = sweep_csv(run_sweep(c), c, false);
  c.threads = 3;
  const auto three = sweep_csv(run_sweep(c), c, false);
  c.threads = 1;
  CHECK(one == sweep_csv(run_sweep(c), c, false));
  // The config line records the thread-independent settings only.
  CHECK(one == three);
}

TEST_CASE("csv layout and json mirror") {
  SweepConfig c;
  c.E = {"ball(2)", "box(3,2)"};
  c.F = {"ball(0.4)"};
  c.L = {2};
  c.eps = {0.1, 0.25};
  auto res = run_sweep(c);
  auto csv = lines(sweep_csv(res, c, true));
  REQUIRE(csv.size() == 4 + res.records.size());
  CHECK(csv[0] == "# plunge sweep csv v1");
  CHECK(csv[1].rfind("# generated ", 0) == 0);
  CHECK(csv[2].rfind("# d=2", 0) == 0);
  CHECK(csv[3] == kSweepColumns);
  CHECK(lines(sweep_csv(res, c, false)).size() == 3 + res.records.size());

  auto j = nlohmann::json::parse(sweep_json(res));
  REQUIRE(j["records"].size() == res.records.size());
  for (std::size_t i = 0; i < res.records.size(); ++i) {
    const auto& row = csv[4 + i];
    const auto& E = res.records[i].E;
    const std::string field = E.find(',') == std::string::npos ? E : "\"" + E + "\"";
    CHECK(row.rfind(field + ",", 0) == 0);
    CHECK(j["records"][i]["plunge_count"].get<long>() == res.records[i].plunge);
    CHECK(j["records"][i]["E"].get<std::string>() == res.records[i].E);
  }
}

TEST_CASE("sweep config from json") {
  auto c = sweep_config_from_json(R"j({"E":["ball(2)"],"F":["box(1,1)"],"L":[2,4],"eps":[0.1],"d":2,"threads":2})j");
  CHECK(c.E.size() == 1);
  CHECK(c.L.size() == 2);
  CHECK(c.threads == 2);
  CHECK_THROWS_AS(sweep_config_from_json("{"), Error);
  CHECK_THROWS_AS(sweep_config_from_json(R"({"L":"two"})"), Error);
}

TEST_CASE("convergence study") {
  auto E = catalog("box", {8}, 1), F = catalog("box", {1}, 1);
  auto t = convergence_study(E, F, {8, 16, 32}, 10);
  REQUIRE(t.diffs.size() == 2);
  REQUIRE(t.top.size() == 3);
  for (const auto& row : t.top) CHECK(row.size() == 10);
  CHECK(t.diffs[1] < t.diffs[0]);
  // Errors shrink roughly like 1/L.
  const double r = (t.diffs[0] * 16) / (t.diffs[1] * 32);
  CHECK(r > 0.5);
  CHECK(r < 2.0);

  auto single = convergence_study(E, F, {8}, 4);
  CHECK(single.diffs.empty());
  CHECK_THROWS_AS(convergence_study(E, F, {16, 8}, 4), Error);
  CHECK_THROWS_AS(convergence_study(E, F, {8, 16}, 0), Error);
}

TEST_CASE("constants path honours the environment") {
  const char* old = std::getenv("PLUNGE_CONSTANTS");
  const std::string saved = old ? old : "";
  setenv("PLUNGE_CONSTANTS", "/tmp/somewhere.json", 1);
  CHECK(constants_path() == "/tmp/somewhere.json");
  unsetenv("PLUNGE_CONSTANTS");
  CHECK(constants_path("fallback.json") == "fallback.json");
  if (old) setenv("PLUNGE_CONSTANTS", saved.c_str(), 1);
  CHECK_FALSE(read_file("/nonexistent/dir/file").has_value());
  CHECK_THROWS_AS(write_file("/nonexistent/dir/file", "x"), Error);
}
