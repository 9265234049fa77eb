#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "spectrum.hpp"

namespace plunge {

DomainPtr catalog(const std::string& name, const std::vector<double>& params, int d = 2);

struct SweepConfig {
  std::vector<std::string> E;  // frequency domain specs, discretized at each L
  std::vector<std::string> F;  // spatial domain specs
  std::vector<double> L;
  std::vector<double> r{1.0};  // dilations applied as dilate(E, r)
  std::vector<double> eps;
  int d = 2;
  double alpha = 0.25;
  std::size_t cap = 6000;
  bool parity = true;  // reflection blocks above the cap
  unsigned threads = 1;
  std::uint64_t seed = 0;
  int raster = 256;  // boundary raster cells across the bounding-box diagonal for continuous estimates
};

struct SweepRecord {
  std::string E, F;
  double L = 0, r = 1, eps = 0;
  std::size_t n_omega = 0, n_boundary = 0;
  double kappa_omega = 0, bE = 0, kappa_E = 0, bF = 0, kappa_F = 0, vol_E = 0, vol_F = 0;
  double trace = 0, trace_residual = 0;
  long plunge = 0, distribution = 0;
  double deviation = 0, deviation_bound = 0;
  bool transition_upper = false, transition_lower = false, schatten_ok = false, deviation_ok = false;
  double rhs_th2 = 0, rhs_th3 = 0;
  double seconds = 0;
  std::string error;
  std::string key() const;
};

struct SweepResult {
  std::vector<SweepRecord> records;
  std::vector<std::string> warnings;
};

void validate(const SweepConfig& cfg);
SweepResult run_sweep(const SweepConfig& cfg);

extern const char* const kSweepColumns;
std::string sweep_csv(const SweepResult& res, const SweepConfig& cfg, bool timestamp = true);

SweepConfig sweep_config_from_json(const std::string& text);
std::string sweep_json(const SweepResult& res);

struct ConvergenceTable {
  std::vector<double> L;
  std::vector<std::vector<double>> top;  // top-k eigenvalues per L, zero padded
  std::vector<double> diffs;             // sup-difference between successive rows
};
ConvergenceTable convergence_study(const DomainPtr& E, const DomainPtr& F, const std::vector<double>& L, std::size_t k,
                                   std::size_t cap = 6000);

// Fitted-constant persistence. The path comes from PLUNGE_CONSTANTS when set.
std::string constants_path(const std::string& fallback = "plunge_constants.json");
std::optional<std::string> read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace plunge
