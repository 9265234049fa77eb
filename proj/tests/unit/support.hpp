#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "doctest.h"
#include "harness.hpp"
#include "json.hpp"

namespace testsupport {

// splitmix64; small and reproducible across platforms.
struct Rng {
  std::uint64_t s;
  explicit Rng(std::uint64_t seed) : s(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() { return (next() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  long integer(long a, long b) { return a + static_cast<long>(next() % static_cast<std::uint64_t>(b - a + 1)); }
};

// Random spectrum in [0,1], biased toward the ends like real concentration spectra.
inline std::vector<double> random_spectrum(Rng& g, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) {
    double u = g.uniform();
    int mode = static_cast<int>(g.next() % 4);
    if (mode == 0) x = 1.0 - 1e-6 * u;
    else if (mode == 1) x = 1e-6 * u;
    else if (mode == 2) x = u;
    else x = std::pow(u, 8.0);
  }
  return v;
}

// Fitted constants are frozen in the constants file: the first run writes missing keys,
// later runs compare against the stored value.
inline double frozen_constant(const std::string& key, double fitted) {
  std::string path = plunge::constants_path();
  nlohmann::json j = nlohmann::json::object();
  if (auto text = plunge::read_file(path)) j = nlohmann::json::parse(*text);
  if (!j.contains(key)) {
    j[key] = fitted;
    plunge::write_file(path, j.dump(2) + "\n");
    MESSAGE("stored " << key << " = " << fitted << " in " << path);
  }
  return j[key].get<double>();
}

}  // namespace testsupport
