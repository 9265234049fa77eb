#include "spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "linalg.hpp"

namespace plunge {

namespace {

std::vector<double> checked(std::vector<double> ev) {
  for (double v : ev)
    require(v >= -kEigTol && v <= 1.0 + kEigTol, Status::numerical,
            "eigenvalue " + std::to_string(v) + " outside [0, 1] beyond tolerance");
  for (double& v : ev) v = std::clamp(v, 0.0, 1.0);
  std::sort(ev.begin(), ev.end(), std::greater<>());
  return ev;
}

std::string describe_source(const GridSet& omega, const Domain& F) {
  std::ostringstream os;
  os << "omega(" << omega.size() << " pts, L=" << omega.resolution() << "), F=" << F.describe();
  return os.str();
}

}  // namespace

SpectrumSummary eigenvalues(const ConcentrationMatrix& m) {
  double herm = 0, scale = 0;
  for (std::size_t j = 0; j < m.n; ++j)
    for (std::size_t i = 0; i < m.n; ++i) {
      herm = std::max(herm, std::abs(m(i, j) - std::conj(m(j, i))));
      scale = std::max(scale, std::abs(m(i, j)));
    }
  require(herm <= 1e-12 * std::max(scale, 1e-300), Status::precondition, "matrix is not Hermitian");
  SpectrumSummary s;
  const auto t = trace_stats(m);
  s.trace = t.trace;
  s.trace_residual = t.trace - t.trace_sq;
  if (m.real) {
    std::vector<double> a(m.a.size());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = m.a[i].real();
    s.lambda = checked(sym_eigenvalues(std::move(a), m.n));
  } else {
    s.lambda = checked(herm_eigenvalues(m.a, m.n));
  }
  if (m.F) s.source = describe_source(m.omega, *m.F);
  return s;
}

SpectrumSummary eigenvalues(const ParityBlocks& b) {
  SpectrumSummary s;
  std::vector<double> all;
  double sq = 0;
  for (std::size_t k = 0; k < b.blocks.size(); ++k) {
    const auto& B = b.blocks[k];
    const std::size_t m = b.sizes[k];
    for (std::size_t i = 0; i < m; ++i) s.trace += B[i + i * m];
    for (double v : B) sq += v * v;
    auto ev = sym_eigenvalues(B, m);
    all.insert(all.end(), ev.begin(), ev.end());
  }
  s.trace_residual = s.trace - sq;
  s.lambda = checked(std::move(all));
  return s;
}

SpectrumSummary summary_from(std::vector<double> lambda, std::string source) {
  SpectrumSummary s;
  s.lambda = checked(std::move(lambda));
  for (double v : s.lambda) {
    s.trace += v;
    s.trace_residual += v - v * v;
  }
  s.source = std::move(source);
  return s;
}

SpectrumSummary spectrum_of(const GridSet& omega, const DomainPtr& F, const SpectrumOptions& opt) {
  if (omega.size() > opt.assemble.cap && opt.allow_parity && F && reflection_symmetric(omega, *F)) {
    auto s = eigenvalues(assemble_parity_blocks(omega, F, opt.assemble));
    s.source = describe_source(omega, *F) + " [parity blocks]";
    return s;
  }
  return eigenvalues(assemble(omega, F, opt.assemble));
}

long plunge_count(const SpectrumSummary& s, double eps) {
  require(eps > 0 && eps < 0.5, Status::invalid_argument, "plunge threshold must lie in (0, 1/2)");
  long c = 0;
  for (double v : s.lambda) c += (v > eps && v < 1.0 - eps);
  return c;
}

long distribution_count(const SpectrumSummary& s, double eps) {
  require(eps > 0 && eps < 1, Status::invalid_argument, "distribution threshold must lie in (0, 1)");
  long c = 0;
  for (double v : s.lambda) c += v > eps;
  return c;
}

double schatten_residual(const SpectrumSummary& s, double p) {
  require(p > 0 && p <= 1, Status::invalid_argument, "Schatten exponent must lie in (0, 1]");
  double r = 0;
  for (double v : s.lambda) {
    const double b = v - v * v;
    if (b > 0) r += std::pow(b, p);
  }
  return r;
}

SchattenBound schatten_plunge_bound(const SpectrumSummary& s, double eps, double p) {
  SchattenBound b;
  b.count = plunge_count(s, eps);
  b.bound = schatten_residual(s, p) / std::pow(eps - eps * eps, p);
  b.holds = double(b.count) <= b.bound * (1 + 1e-12);
  return b;
}

double schatten_transfer(double C, double D, double a, double p) {
  require(C > 0 && D >= 0 && a > 0, Status::invalid_argument, "transfer constants must be positive");
  require(p > 0 && p <= 1, Status::invalid_argument, "Schatten exponent must lie in (0, 1]");
  return C * std::pow(D + 1.0 / p, a);
}

TransitionCheck transition_check(const SpectrumSummary& s) {
  TransitionCheck t;
  t.K = static_cast<long>(std::ceil(s.trace - 1e-9));
  t.width = std::max(2.0 * s.trace_residual, 1.0);
  const long up = static_cast<long>(std::ceil(double(t.K) + t.width - 1e-12));
  const long lo = static_cast<long>(std::floor(double(t.K) - t.width + 1e-12));
  const long n = static_cast<long>(s.lambda.size());
  for (long i = std::max(up, 1L); i <= n; ++i)
    if (s.lambda[i - 1] > 0.5 + 1e-8) t.upper_ok = false;
  for (long i = 1; i <= std::min(lo, n); ++i)
    if (s.lambda[i - 1] < 0.5 - 1e-8) t.lower_ok = false;
  return t;
}

DeviationCheck deviation_check(const SpectrumSummary& s, double eps) {
  const auto t = transition_check(s);
  DeviationCheck d;
  d.deviation = std::abs(double(distribution_count(s, eps)) - s.trace);
  const double tau = 0.999 * std::min(eps, 1.0 - eps);
  d.bound = t.width + double(plunge_count(s, tau)) + 1.0;
  d.holds = d.deviation <= d.bound + 1e-9;
  return d;
}

std::string audit(const SpectrumSummary& s) {
  std::ostringstream err;
  const double n = double(std::max<std::size_t>(s.lambda.size(), 1));
  double sum = 0, res = 0;
  for (double v : s.lambda) {
    sum += v;
    res += v - v * v;
  }
  if (std::abs(sum - s.trace) > 1e-9 * n) err << "trace mismatch; ";
  if (std::abs(res - s.trace_residual) > 1e-9 * n) err << "trace residual mismatch; ";
  if (!std::is_sorted(s.lambda.begin(), s.lambda.end(), std::greater<>())) err << "not sorted; ";
  for (double eps : {0.001, 0.01, 0.1, 0.25, 0.45})
    for (double p : {0.1, 0.25, 0.5, 1.0})
      if (!schatten_plunge_bound(s, eps, p).holds) err << "Schatten bound fails at eps=" << eps << " p=" << p << "; ";
  const auto t = transition_check(s);
  if (!t.upper_ok) err << "upper transition fails; ";
  if (!t.lower_ok) err << "lower transition fails; ";
  for (double eps : {0.01, 0.1, 0.5, 0.9})
    if (!deviation_check(s, eps).holds) err << "deviation bound fails at eps=" << eps << "; ";
  return err.str();
}

std::string spectrum_csv(const SpectrumSummary& s) {
  std::ostringstream os;
  os.precision(17);
  os << "index,lambda\n";
  for (std::size_t i = 0; i < s.lambda.size(); ++i) os << i + 1 << ',' << s.lambda[i] << '\n';
  return os.str();
}

}  // namespace plunge
