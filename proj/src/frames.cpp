#include "frames.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "linalg.hpp"

namespace plunge {

namespace {

constexpr int kGTable = 4096;
constexpr int kSamples = 4096;
constexpr long kPadded = 1L << 18;
constexpr int kLagrange = 10;

struct GL8 {
  std::vector<double> x, w;
  GL8() { gauss_legendre(8, 0.0, 1.0, x, w); }
};
const GL8& gl8() {
  static const GL8 g;
  return g;
}

struct FftwBuffer {
  fftw_complex* p = nullptr;
  explicit FftwBuffer(std::size_t n) : p(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
    require(p != nullptr, Status::internal, "FFT allocation failed");
  }
  ~FftwBuffer() { fftw_free(p); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
};

}  // namespace

// ---------------------------------------------------------------- Window

Window::Window(double alpha, double knob) : alpha_(alpha), knob_(knob) {
  require(alpha > 0 && alpha < 0.5, Status::invalid_argument, "alpha must lie in (0, 1/2)");
  require(knob > 0 && std::isfinite(knob), Status::invalid_argument, "profile knob must be positive");
  const auto& g = gl8();
  gtab_.assign(kGTable + 1, 0.0);
  const double h = 1.0 / kGTable;
  for (int i = 0; i < kGTable; ++i) {
    double s = 0;
    for (int q = 0; q < 8; ++q) s += g.w[q] * bump((i + g.x[q]) * h);
    gtab_[i + 1] = gtab_[i] + s * h;
  }
  require(gtab_.back() > 0 && std::isfinite(gtab_.back()), Status::numerical,
          "normalizing integral of the window bump vanished; lower the profile knob");
  build_table();
  fit_decay();
}

double Window::bump(double x) const {
  const double u = 1.0 - x * x;
  if (u <= 0) return 0.0;
  return std::exp(-knob_ * std::pow(u, -1.0 / alpha_));
}

double Window::G(double y) const {
  const double h = 1.0 / kGTable;
  const int i = std::clamp(static_cast<int>(y * kGTable), 0, kGTable - 1);
  const double x0 = i * h, len = y - x0;
  if (len <= 0) return gtab_[i];
  const auto& g = gl8();
  double s = 0;
  for (int q = 0; q < 8; ++q) s += g.w[q] * bump(x0 + g.x[q] * len);
  return gtab_[i] + s * len;
}

double Window::H(double x) const {
  if (x <= -1.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double g = G(std::abs(x)) / (2.0 * gtab_.back());
  return x < 0 ? 0.5 - g : 0.5 + g;
}

double Window::theta(double x) const {
  if (x <= -1.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return std::sin(0.5 * kPi * H(x));
}

double Window::psi(double t, bool minus) const {
  if (minus) t = 1.0 - t;
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return theta(3.0 * t - 1.0) * theta(5.0 - 6.0 * t);
}

void Window::build_table() {
  FftwBuffer buf(kPadded);
  fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(kPadded), buf.p, buf.p, FFTW_FORWARD, FFTW_ESTIMATE);
  const double dt = 1.0 / kSamples;
  for (long n = 0; n < kPadded; ++n) {
    buf.p[n][0] = n < kSamples ? psi(n * dt, false) * dt : 0.0;
    buf.p[n][1] = 0.0;
  }
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  half_ = kPadded / 2;
  centred_.resize(kPadded);
  for (long k = 0; k < kPadded; ++k) {
    const long kk = k < half_ ? k : k - kPadded;
    const double eta = kk * eta_spacing();
    centred_[kk + half_] = std::complex<double>(buf.p[k][0], buf.p[k][1]) * std::polar(1.0, kPi * eta);
  }
  eta_max_ = (half_ - kLagrange) * eta_spacing();
}

std::complex<double> Window::psi_hat(double eta, bool minus) const {
  if (!(std::abs(eta) <= eta_max_)) return 0.0;
  const double u = eta / eta_spacing() + double(half_);
  const long i0 = static_cast<long>(std::floor(u)) - kLagrange / 2 + 1;
  const double t = u - double(i0);
  std::complex<double> v = 0;
  for (int a = 0; a < kLagrange; ++a) {
    double l = 1;
    for (int b = 0; b < kLagrange; ++b)
      if (b != a) l *= (t - b) / double(a - b);
    v += l * centred_[i0 + a];
  }
  v *= std::polar(1.0, -kPi * eta);
  if (minus) v = std::polar(1.0, -2.0 * kPi * eta) * std::conj(v);
  return v;
}

void Window::fit_decay() {
  const double p = 1.0 - alpha_;
  std::vector<double> xs, ys;
  for (int n = static_cast<int>(fit_lo); n < static_cast<int>(fit_hi); ++n) {
    double best = 0, at = n;
    for (long k = std::lround(n / eta_spacing()); k < std::lround((n + 1) / eta_spacing()); ++k) {
      const double m = std::abs(centred_[k + half_]);
      if (m > best) best = m, at = k * eta_spacing();
    }
    if (best > 0) {
      xs.push_back(std::pow(at, p));
      ys.push_back(std::log(best));
    }
  }
  require(xs.size() >= 4, Status::numerical, "window transform vanished on the fit range");
  const double n = double(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit_a = -slope;
  fit_A = (sy - slope * sx) / n;
  double ss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit_A - fit_a * xs[i]);
    ss += r * r;
  }
  fit_rms = std::sqrt(ss / n);
  // Raise the intercept so the curve bounds every table sample in range.
  double lift = 0;
  for (long k = std::lround(fit_lo / eta_spacing()); k <= std::lround(fit_hi / eta_spacing()); ++k) {
    const double m = std::abs(centred_[k + half_]);
    if (m <= 0) continue;
    const double eta = k * eta_spacing();
    lift = std::max(lift, std::log(m) - (fit_A - fit_a * std::pow(eta, p)));
  }
  fit_A += lift;
}

double Window::tail_integral(double cut) const {
  const auto& g = gl8();
  const double p = 1.0 - alpha_;
  double total = 0;
  for (double lo = std::max(cut, 0.0); lo < 1e7; lo += 1.0) {
    double s = 0;
    for (int q = 0; q < 8; ++q) s += g.w[q] * std::exp(2.0 * (fit_A - fit_a * std::pow(lo + g.x[q], p)));
    total += s;
    if (s < 1e-18 * total || s < 1e-300) break;
  }
  return total;
}

// ---------------------------------------------------------------- partition

const AxisInterval& AxisPartition::at(int j) const {
  require(j >= jmin && j <= jmax, Status::invalid_argument, "interval index outside the partition truncation");
  return iv[static_cast<std::size_t>(j - jmin)];
}

double AxisPartition::dsum(double delta) const {
  double s = 0;
  for (const auto& v : iv)
    if (v.dlen >= delta) s += v.dlen;
  return s;
}

FramePartition partition(const std::vector<double>& W, double delta) {
  require(!W.empty(), Status::invalid_argument, "partition needs at least one width");
  require(delta > 0 && delta < 1, Status::invalid_argument, "delta must lie in (0, 1)");
  FramePartition p;
  p.delta = delta;
  for (double w : W) {
    require(w > 0 && std::isfinite(w), Status::invalid_argument, "partition widths must be positive");
    AxisPartition ax;
    ax.W = w;
    auto make = [&](int j) {
      AxisInterval v;
      v.j = j;
      const int aj = std::abs(j);
      v.x = (j > 0 ? 1.0 : (j < 0 ? -1.0 : 0.0)) * 0.5 * w * (1.0 - std::ldexp(1.0, -aj));
      v.ilen = w / (3.0 * std::ldexp(1.0, aj));
      v.a = v.x - 0.5 * v.ilen;
      v.dlen = j >= 0 ? w / std::ldexp(1.0, j + 1) : w / std::ldexp(1.0, aj);
      return v;
    };
    int jmax = 0;
    while (make(jmax + 1).dlen >= 0.5 * delta) ++jmax;
    int jmin = -1;
    while (make(jmin - 1).dlen >= 0.5 * delta) --jmin;
    ax.jmin = jmin;
    ax.jmax = jmax;
    for (int j = jmin; j <= jmax; ++j) ax.iv.push_back(make(j));
    p.axes.push_back(std::move(ax));
  }
  return p;
}

// ---------------------------------------------------------------- frame vectors

double theta_j(const Window& w, const AxisInterval& iv, double x) {
  const double inext = iv.j >= 0 ? 0.5 * iv.ilen : 2.0 * iv.ilen;
  const double xnext = iv.a + iv.ilen + 0.5 * inext;
  return w.theta(2.0 * (x - iv.x) / iv.ilen) * w.theta(-2.0 * (x - xnext) / inext);
}

std::complex<double> phi_1d(const Window& w, const AxisInterval& iv, long k, double x) {
  const double t = theta_j(w, iv, x);
  if (t == 0.0) return 0.0;
  return std::sqrt(2.0 / iv.dlen) * t * std::polar(1.0, 2.0 * kPi * x * double(k) / iv.dlen);
}

std::complex<double> phi_hat_1d(const Window& w, const AxisInterval& iv, long k, double xi) {
  const double z = xi - double(k) / iv.dlen;
  return std::sqrt(2.0 / iv.dlen) * iv.dlen * std::polar(1.0, -2.0 * kPi * iv.a * z) *
         w.psi_hat(iv.dlen * z, iv.j < 0);
}

std::complex<double> FrameVector::operator()(const double* x) const {
  std::complex<double> v = 1.0;
  for (std::size_t i = 0; i < iv.size(); ++i) v *= phi_1d(*w, iv[i], k[i], x[i]);
  return v;
}

std::complex<double> FrameVector::transform(const double* xi) const {
  std::complex<double> v = 1.0;
  for (std::size_t i = 0; i < iv.size(); ++i) v *= phi_hat_1d(*w, iv[i], k[i], xi[i]);
  return v;
}

FrameVector frame_vector(const FramePartition& p, const Window& w, const std::vector<int>& j,
                         const std::vector<long>& k) {
  require(static_cast<int>(j.size()) == p.dim() && k.size() == j.size(), Status::invalid_argument,
          "frame index has the wrong dimension");
  FrameVector f;
  f.w = &w;
  for (int i = 0; i < p.dim(); ++i) f.iv.push_back(p.axes[i].at(j[i]));
  f.k = k;
  return f;
}

// ---------------------------------------------------------------- tight frame

namespace {

// Integral of g*h over [lo, hi], split at the given breakpoints.
double inner_1d(const std::function<double(double)>& g, const std::function<double(double)>& h, double lo, double hi,
                std::vector<double> breaks) {
  std::vector<double> x, w;
  gauss_legendre(16, 0.0, 1.0, x, w);
  breaks.push_back(lo);
  breaks.push_back(hi);
  std::sort(breaks.begin(), breaks.end());
  double s = 0;
  for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
    const double a0 = std::max(lo, breaks[b]), a1 = std::min(hi, breaks[b + 1]);
    if (a1 <= a0) continue;
    const int panels = 64;
    const double ph = (a1 - a0) / panels;
    for (int q = 0; q < panels; ++q)
      for (int r = 0; r < 16; ++r) {
        const double t = a0 + (q + x[r]) * ph;
        s += w[r] * ph * g(t) * h(t);
      }
  }
  return s;
}

}  // namespace

FrameResidual tight_frame_residual(const FramePartition& p, const Window& w, const std::vector<SeparableFunction>& fs,
                                   double tail_tol, std::size_t budget) {
  FrameResidual out;
  const int d = p.dim();
  for (const auto& f : fs) {
    require(f.dim() == d, Status::invalid_argument, "test function has the wrong dimension");
    const std::size_t R = f.terms.size();
    require(R > 0, Status::invalid_argument, "test function has no terms");
    for (const auto& t : f.terms) require(static_cast<int>(t.size()) == d, Status::invalid_argument, "bad term");

    std::vector<std::vector<double>> norm(R, std::vector<double>(R, 1.0));
    std::vector<std::vector<double>> total(R, std::vector<double>(R, 1.0));
    for (int i = 0; i < d; ++i) {
      const auto& ax = p.axes[i];
      const double lo = f.support.lo[i], hi = f.support.hi[i];
      const auto& first = ax.at(ax.jmin + 1);
      const auto& last = ax.at(ax.jmax);
      require(lo >= first.x - 0.5 * first.ilen && hi <= last.x + 0.5 * last.ilen, Status::precondition,
              "test function support reaches intervals beyond the partition truncation");
      const std::vector<double> br = i < static_cast<int>(f.breaks.size()) ? f.breaks[i] : std::vector<double>{};
      for (std::size_t r = 0; r < R; ++r)
        for (std::size_t q = 0; q < R; ++q) norm[r][q] *= inner_1d(f.terms[r][i], f.terms[q][i], lo, hi, br);
      // Tolerances are relative to the energy of this axis factor, not of each interval.
      double scale = 0;
      for (std::size_t r = 0; r < R; ++r) scale += 2.0 * inner_1d(f.terms[r][i], f.terms[r][i], lo, hi, br);

      std::vector<std::vector<double>> S(R, std::vector<double>(R, 0.0));
      for (const auto& iv : ax.iv) {
        if (iv.a + iv.dlen <= lo || iv.a >= hi) continue;
        // Coefficients come from an N-point midpoint DFT; only |k| < N/4 enters the sum, so aliasing stays
        // small. N doubles until the band [N/4, N/2) and the change of the band sum are both below tail_tol
        // times the axis energy.
        std::size_t N = 256;
        std::vector<std::vector<double>> band, prev;
        while (true) {
          require(N <= budget, Status::numerical, "frame coefficient truncation budget exhausted");
          FftwBuffer buf(N * R);
          const double h = iv.dlen / double(N);
          for (std::size_t r = 0; r < R; ++r)
            for (std::size_t n = 0; n < N; ++n) {
              const double x = iv.a + (double(n) + 0.5) * h;
              const double v = (x >= lo && x <= hi) ? f.terms[r][i](x) * theta_j(w, iv, x) : 0.0;
              buf.p[r * N + n][0] = v;
              buf.p[r * N + n][1] = 0.0;
            }
          int n_int = static_cast<int>(N);
          fftw_plan plan = fftw_plan_many_dft(1, &n_int, static_cast<int>(R), buf.p, nullptr, 1, n_int, buf.p, nullptr,
                                              1, n_int, FFTW_FORWARD, FFTW_ESTIMATE);
          fftw_execute(plan);
          fftw_destroy_plan(plan);
          const double c = 2.0 / iv.dlen * h * h;
          band.assign(R, std::vector<double>(R, 0.0));
          double energy = 0, tail = 0;
          for (std::size_t n = 0; n < N; ++n) {
            const std::size_t kk = std::min(n, N - n);
            for (std::size_t r = 0; r < R; ++r) {
              const auto& a = buf.p[r * N + n];
              const double e = c * (a[0] * a[0] + a[1] * a[1]);
              if (kk < N / 4) {
                energy += e;
                for (std::size_t q = 0; q < R; ++q) band[r][q] += c * (a[0] * buf.p[q * N + n][0] + a[1] * buf.p[q * N + n][1]);
              } else {
                tail += e;
              }
            }
          }
          double change = 0;
          if (!prev.empty())
            for (std::size_t r = 0; r < R; ++r) change += std::abs(band[r][r] - prev[r][r]);
          const bool done = energy == 0.0 || (!prev.empty() && tail <= tail_tol * scale && change <= tail_tol * scale);
          if (done) {
            out.max_nodes = std::max(out.max_nodes, N);
            for (std::size_t r = 0; r < R; ++r)
              for (std::size_t q = 0; q < R; ++q) S[r][q] += band[r][q];
            break;
          }
          prev = band;
          N *= 2;
        }
      }
      for (std::size_t r = 0; r < R; ++r)
        for (std::size_t q = 0; q < R; ++q) total[r][q] *= S[r][q];
    }
    double fn = 0, tot = 0;
    for (std::size_t r = 0; r < R; ++r)
      for (std::size_t q = 0; q < R; ++q) {
        fn += norm[r][q];
        tot += total[r][q];
      }
    require(fn > 0, Status::invalid_argument, "test function has zero norm");
    const double res = std::abs(tot - std::ldexp(fn, d)) / fn;
    out.each.push_back(res);
    out.residual = std::max(out.residual, res);
  }
  return out;
}

namespace {

using Factor = std::function<double(double)>;

double smooth_bump(double u) { return std::abs(u) < 1 ? std::exp(1.0 - 1.0 / (1.0 - u * u)) : 0.0; }

}  // namespace

std::vector<SeparableFunction> random_test_functions(const Box& support, std::size_t count, std::uint64_t seed) {
  const int d = support.dim();
  require(d >= 1, Status::invalid_argument, "support box has no dimension");
  std::mt19937_64 rng(seed);
  auto uni = [&](double a, double b) { return a + (b - a) * std::generate_canonical<double, 53>(rng); };
  std::vector<SeparableFunction> out;
  for (std::size_t n = 0; n < count; ++n) {
    SeparableFunction f;
    f.support = support;
    f.breaks.assign(d, {});
    const int terms = 1 + static_cast<int>(rng() % 2);
    for (int r = 0; r < terms; ++r) {
      std::vector<Factor> row;
      for (int i = 0; i < d; ++i) {
        const double lo = support.lo[i], hi = support.hi[i], w = hi - lo;
        const double c = uni(lo + 0.3 * w, hi - 0.3 * w);
        const double h = uni(0.15, std::min(c - lo, hi - c));
        const double amp = uni(0.5, 2.0) * (rng() % 2 ? 1.0 : -1.0);
        switch (rng() % 3) {
          case 0:
            row.push_back([=](double x) { return amp * smooth_bump((x - c) / h); });
            break;
          case 1: {
            const double freq = uni(0.5, 6.0), ph = uni(0.0, 2 * kPi);
            row.push_back([=](double x) { return amp * smooth_bump((x - c) / h) * std::cos(2 * kPi * freq * x + ph); });
            break;
          }
          default: {
            const double a = c - h, b = c + h, c1 = uni(-1, 1), c2 = uni(-1, 1);
            row.push_back([=](double x) {
              if (x < a || x > b) return 0.0;
              const double u = (x - c) / h;
              const double v = 1.0 - std::abs(u);
              return amp * v * v * (1.0 + 2.0 * std::abs(u)) * (1.0 + c1 * u + c2 * u * u);
            });
            f.breaks[i].insert(f.breaks[i].end(), {a, c, b});
          }
        }
      }
      f.terms.push_back(std::move(row));
    }
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace plunge
