#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "geometry.hpp"

namespace plunge {

// Smooth step theta with theta = 0 below -1, 1 above 1 and theta(-x)^2 + theta(x)^2 = 1,
// plus a sampled transform of the unit-interval profile used by all frame vectors.
class Window {
 public:
  explicit Window(double alpha = 0.25, double knob = 1.0);

  double alpha() const { return alpha_; }
  double knob() const { return knob_; }
  double bump(double x) const;
  double H(double x) const;
  double theta(double x) const;

  // Profile on [0, 1]; minus selects the mirrored profile used for negative j.
  double psi(double t, bool minus) const;
  std::complex<double> psi_hat(double eta, bool minus) const;

  double eta_spacing() const { return 1.0 / 64.0; }
  double eta_max() const { return eta_max_; }

  // log|psi_hat(eta)| <= fit_A - fit_a * eta^(1 - alpha) on the fit range.
  double fit_A = 0, fit_a = 0, fit_rms = 0, fit_lo = 1, fit_hi = 200;
  // Bound on sum_{|eta| > cut} |psi_hat|^2 per unit eta from the decay fit.
  double tail_integral(double cut) const;

 private:
  double G(double y) const;  // integral of the bump from 0 to y, y in [0, 1]
  void build_table();
  void fit_decay();

  double alpha_, knob_;
  std::vector<double> gtab_;
  std::vector<std::complex<double>> centred_;  // psi_hat(eta) * exp(i pi eta) at eta = k/64
  long half_ = 0;
  double eta_max_ = 0;
};

struct AxisInterval {
  int j = 0;
  double x = 0;      // centre of I_j
  double ilen = 0;   // |I_j|
  double a = 0;      // left end of D_j
  double dlen = 0;   // |D_j|
};

struct AxisPartition {
  double W = 0;
  int jmin = 0, jmax = 0;
  std::vector<AxisInterval> iv;  // indexed by j - jmin
  const AxisInterval& at(int j) const;
  // Sum of |D_j| over intervals with |D_j| >= delta.
  double dsum(double delta) const;
};

struct FramePartition {
  std::vector<AxisPartition> axes;
  double delta = 0;
  int dim() const { return static_cast<int>(axes.size()); }
};

FramePartition partition(const std::vector<double>& W, double delta);

double theta_j(const Window& w, const AxisInterval& iv, double x);
std::complex<double> phi_1d(const Window& w, const AxisInterval& iv, long k, double x);
std::complex<double> phi_hat_1d(const Window& w, const AxisInterval& iv, long k, double xi);

// Tensor frame vector Phi_{j,k}.
struct FrameVector {
  const Window* w = nullptr;
  std::vector<AxisInterval> iv;
  std::vector<long> k;
  std::complex<double> operator()(const double* x) const;
  std::complex<double> transform(const double* xi) const;
};
FrameVector frame_vector(const FramePartition& p, const Window& w, const std::vector<int>& j,
                         const std::vector<long>& k);

// Real function on R^d of the form sum_r prod_i g_{r,i}(x_i), vanishing outside the support box.
struct SeparableFunction {
  std::vector<std::vector<std::function<double(double)>>> terms;
  Box support;
  std::vector<std::vector<double>> breaks;  // per axis, points where factors may jump
  int dim() const { return support.dim(); }
};

struct FrameResidual {
  double residual = 0;       // max over functions
  std::vector<double> each;  // per function
  std::size_t max_nodes = 0; // largest DFT length used (truncation budget)
};

// |sum |<f, Phi>|^2 - 2^d ||f||^2| / ||f||^2, k-sums truncated by DFT length with the tail
// (energy in the outer half of the k-window) kept below tail_tol * ||f||^2.
FrameResidual tight_frame_residual(const FramePartition& p, const Window& w, const std::vector<SeparableFunction>& fs,
                                   double tail_tol = 1e-9, std::size_t budget = std::size_t(1) << 22);

// Seeded mix of smooth bumps, modulated bumps and C^1 piecewise polynomials supported in the box.
std::vector<SeparableFunction> random_test_functions(const Box& support, std::size_t count, std::uint64_t seed);

// ---------------------------------------------------------------- index families

enum class Family : std::uint8_t { low = 0, med = 1, high = 2 };

struct JClass {
  std::vector<int> j;
  std::vector<double> scale;     // |D_{j_i}|
  std::vector<Index> klo, khi;   // enumerated k-box, inclusive
  std::vector<Family> label;     // row-major over the k-box
  std::size_t low = 0, med = 0, high = 0;
  std::size_t med_violations = 0;  // med points with dist(k, M_j dE_L) >= s
};

struct IndexClassification {
  FramePartition p;
  double s = 1;
  GridSet E;
  std::vector<JClass> js;      // all j with min |D_{j_i}| >= delta
  std::size_t low = 0, med = 0, high = 0;
  std::size_t ring = 0;        // j with some |D| in [delta/2, delta), entirely high
  std::size_t med_violations = 0;
};

// Squared distances from integer points of a box to the scaled set {(c_i m_i)}.
std::vector<double> scaled_distance2(const GridSet& set, const std::vector<double>& c, const std::vector<Index>& qlo,
                                     const std::vector<Index>& qhi, bool complement);

// Classification of the k-box for one diagonal scaling c = diag(|D_{j_i}|) / L.
JClass classify_k(const GridSet& E, const GridSet& boundary, const std::vector<double>& c, double s, Index guard);

IndexClassification classify(const FramePartition& p, const GridSet& E, double s, Index guard = -1);

// Lattice points within closed distance s of the discrete boundary (identity scaling).
std::size_t boundary_neighbourhood_count(const GridSet& E, double s);

struct EnergySums {
  double low_sum = 0;
  double high_sum = 0;
  std::size_t med_count = 0;
  double low_tail = 0;  // decay-fit bound on the truncated part of the complement sums
};
EnergySums energy_sums(const IndexClassification& cls, const Window& w);

struct IsraelCertificate {
  double hypothesis_lhs = 0;
  double threshold = 0;
  bool hypothesis_met = false;
  long conclusion_count = 0;  // plunge count of the computed spectrum
  double bound = 0;           // 2^{1-d} #Gamma^med
  bool holds = true;
  double high_part = 0, low_part = 0, outside_box = 0, small_d = 0;
  std::size_t med = 0, low = 0, high = 0;
};

// F is the centred box with side lengths W; the frame lives on L^2(F).
IsraelCertificate israel_certificate(const GridSet& omega, const std::vector<double>& W, double s, double delta,
                                     double eps, const Window& w);

// s = A_s * log(max{W, 1/eta}^{d-1} |dE| / (kappa eps))^{1/(1-alpha)}, at least 1.
double s_from_shape(double A_s, int d, double W_max, double eta, double bE, double kappa, double eps, double alpha);

}  // namespace plunge
