#pragma once

#include <string>
#include <vector>

#include "operator.hpp"

namespace plunge {

struct SpectrumSummary {
  std::vector<double> lambda;  // descending, clipped to [0, 1]
  double trace = 0;
  double trace_residual = 0;  // tr(T - T^2)
  std::string source;
};

constexpr double kEigTol = 1e-9;

SpectrumSummary eigenvalues(const ConcentrationMatrix& m);
SpectrumSummary eigenvalues(const ParityBlocks& b);
// Builds a summary from a raw list; used for hand-written spectra.
SpectrumSummary summary_from(std::vector<double> lambda, std::string source = "");

struct SpectrumOptions {
  AssembleOptions assemble;
  bool allow_parity = true;  // use reflection blocks when the full matrix exceeds the cap
};
SpectrumSummary spectrum_of(const GridSet& omega, const DomainPtr& F, const SpectrumOptions& opt = {});

long plunge_count(const SpectrumSummary& s, double eps);
long distribution_count(const SpectrumSummary& s, double eps);
double schatten_residual(const SpectrumSummary& s, double p);

struct SchattenBound {
  double bound = 0;
  long count = 0;
  bool holds = false;
};
SchattenBound schatten_plunge_bound(const SpectrumSummary& s, double eps, double p);
double schatten_transfer(double C, double D, double a, double p);

struct TransitionCheck {
  bool upper_ok = true;
  bool lower_ok = true;
  long K = 0;
  double width = 1;
};
TransitionCheck transition_check(const SpectrumSummary& s);

struct DeviationCheck {
  double deviation = 0;
  double bound = 0;
  bool holds = false;
};
DeviationCheck deviation_check(const SpectrumSummary& s, double eps);

// Every exact spectral inequality on one spectrum; empty string when all hold.
std::string audit(const SpectrumSummary& s);

std::string spectrum_csv(const SpectrumSummary& s);

}  // namespace plunge
