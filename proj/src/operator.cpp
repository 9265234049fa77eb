#include "operator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "linalg.hpp"

namespace plunge {

namespace {

double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

struct Nodes {
  int d = 0;
  std::vector<double> x, w;
  void add(const double* p, double weight) {
    x.insert(x.end(), p, p + d);
    w.push_back(weight);
  }
};

void tensor_gl(const Box& b, int n, Nodes& out) {
  const int d = b.dim();
  std::vector<std::vector<double>> xs(d), ws(d);
  for (int i = 0; i < d; ++i) gauss_legendre(n, b.lo[i], b.hi[i], xs[i], ws[i]);
  std::vector<int> idx(d, 0);
  std::vector<double> p(d);
  while (true) {
    double w = 1;
    for (int i = 0; i < d; ++i) {
      p[i] = xs[i][idx[i]];
      w *= ws[i][idx[i]];
    }
    out.add(p.data(), w);
    int i = 0;
    while (i < d && ++idx[i] == n) idx[i++] = 0;
    if (i == d) break;
  }
}

void masked_midpoint(const Domain& F, int n, Nodes& out) {
  const int d = F.dim();
  const Box& b = F.bbox();
  std::vector<double> h(d);
  double cellvol = 1;
  for (int i = 0; i < d; ++i) {
    h[i] = (b.hi[i] - b.lo[i]) / n;
    cellvol *= h[i];
  }
  std::vector<int> idx(d, 0);
  std::vector<double> p(d);
  while (true) {
    for (int i = 0; i < d; ++i) p[i] = b.lo[i] + (idx[i] + 0.5) * h[i];
    if (F.contains(p.data())) out.add(p.data(), cellvol);
    int i = 0;
    while (i < d && ++idx[i] == n) idx[i++] = 0;
    if (i == d) break;
  }
}

void polar_gl(double r0, double r1, int n, Nodes& out) {
  std::vector<double> rx, rw;
  gauss_legendre(n, r0, r1, rx, rw);
  for (int a = 0; a < n; ++a) {
    const double t = 2.0 * kPi * (a + 0.5) / n;
    for (int k = 0; k < n; ++k) {
      const double p[2] = {rx[k] * std::cos(t), rx[k] * std::sin(t)};
      out.add(p, rw[k] * rx[k] * 2.0 * kPi / n);
    }
  }
}

void quadrature(const Domain& F, int n, Nodes& out) {
  const int d = F.dim();
  const auto& par = F.params();
  switch (F.kind()) {
    case Kind::box:
      tensor_gl(F.bbox(), n, out);
      return;
    case Kind::ball:
      if (d == 1) return tensor_gl(F.bbox(), n, out);
      if (d == 2) return polar_gl(0.0, par[0], n, out);
      break;
    case Kind::annulus:
      if (d == 2) return polar_gl(par[0], par[1], n, out);
      break;
    case Kind::l_shape: {
      const double h = 0.5 * par[0], a = h - par[1];
      tensor_gl(Box{{-h, -h}, {a, h}}, n, out);
      tensor_gl(Box{{a, -h}, {h, a}}, n, out);
      return;
    }
    case Kind::finite_union:
      if (F.volume()) {
        for (const auto& k : F.children()) quadrature(*k, n, out);
        return;
      }
      break;
    case Kind::dilation: {
      Nodes sub;
      sub.d = d;
      quadrature(*F.children()[0], n, sub);
      const double t = par[0], s = std::pow(t, d);
      for (std::size_t i = 0; i < sub.w.size(); ++i) {
        std::vector<double> p(sub.x.begin() + i * d, sub.x.begin() + (i + 1) * d);
        for (auto& v : p) v *= t;
        out.add(p.data(), sub.w[i] * s);
      }
      return;
    }
    case Kind::shift: {
      Nodes sub;
      sub.d = d;
      quadrature(*F.children()[0], n, sub);
      for (std::size_t i = 0; i < sub.w.size(); ++i) {
        std::vector<double> p(sub.x.begin() + i * d, sub.x.begin() + (i + 1) * d);
        for (int a = 0; a < d; ++a) p[a] += par[a];
        out.add(p.data(), sub.w[i]);
      }
      return;
    }
    default:
      break;
  }
  masked_midpoint(F, n, out);
}

}  // namespace

IndicatorTransform::IndicatorTransform(DomainPtr F, double cell) : F_(std::move(F)), cell_(cell) {
  require(F_ != nullptr, Status::invalid_argument, "null domain");
  if (cell_ <= 0) {
    require(F_->has_exact_transform(), Status::unsupported,
            "exact transform requested for " + F_->describe() + ", which has no closed form");
    return;
  }
  const int d = F_->dim();
  const Box& b = F_->bbox();
  std::vector<Index> n(d), idx(d, 0);
  double total = 1;
  for (int i = 0; i < d; ++i) {
    n[i] = std::max<Index>(1, static_cast<Index>(std::ceil((b.hi[i] - b.lo[i]) / cell_)));
    total *= double(n[i]);
  }
  require(total <= 4e6, Status::cap_exceeded, "rasterization grid too large");
  std::vector<double> p(d);
  while (true) {
    for (int i = 0; i < d; ++i) p[i] = b.lo[i] + (double(idx[i]) + 0.5) * cell_;
    if (F_->contains(p.data())) centres_.insert(centres_.end(), p.begin(), p.end());
    int i = 0;
    while (i < d && ++idx[i] == n[i]) idx[i++] = 0;
    if (i == d) break;
  }
}

std::complex<double> IndicatorTransform::operator()(const double* xi) const {
  if (exact()) return F_->transform(xi);
  const int d = F_->dim();
  double env = 1;
  for (int i = 0; i < d; ++i) env *= cell_ * sinc(kPi * cell_ * xi[i]);
  std::complex<double> s = 0;
  for (std::size_t c = 0; c < centres_.size(); c += d) {
    double ph = 0;
    for (int i = 0; i < d; ++i) ph += centres_[c + i] * xi[i];
    s += std::polar(1.0, -2.0 * kPi * ph);
  }
  return env * s;
}

std::complex<double> ft_indicator(const Domain& F, const double* xi) { return F.transform(xi); }

DifferenceTable::DifferenceTable(const GridSet& omega, const IndicatorTransform& ft) : d_(omega.dim()) {
  const auto lo = omega.lower(), hi = omega.upper();
  span_.resize(d_);
  stride_.assign(d_, 1);
  double total = 1;
  for (int i = 0; i < d_; ++i) {
    span_[i] = hi[i] - lo[i];
    total *= double(2 * span_[i] + 1);
  }
  require(total <= 2e8, Status::cap_exceeded, "difference table too large");
  for (int i = d_ - 2; i >= 0; --i) stride_[i] = stride_[i + 1] * (2 * span_[i + 1] + 1);
  v_.resize(static_cast<std::size_t>(total));
  std::vector<Index> idx(d_, 0);
  std::vector<double> xi(d_);
  const double L = omega.resolution();
  for (std::size_t c = 0; c < v_.size(); ++c) {
    Index r = static_cast<Index>(c);
    for (int i = 0; i < d_; ++i) {
      idx[i] = r / stride_[i];
      r %= stride_[i];
      xi[i] = double(idx[i] - span_[i]) / L;
    }
    v_[c] = ft(xi.data());
  }
}

const std::complex<double>& DifferenceTable::at(const Index* k, const Index* kp) const {
  Index off = 0;
  for (int i = 0; i < d_; ++i) off += (k[i] - kp[i] + span_[i]) * stride_[i];
  return v_[off];
}

void check_in_cell(const Domain& F, double L) {
  const Box& b = F.bbox();
  const double tol = 1e-12 * L;
  for (int i = 0; i < b.dim(); ++i)
    require(b.lo[i] >= -0.5 * L - tol && b.hi[i] <= 0.5 * L + tol, Status::precondition,
            "spatial domain " + F.describe() + " escapes the fundamental cell of side " + std::to_string(L));
}

namespace {

IndicatorTransform make_transform(const GridSet& omega, const DomainPtr& F, const AssembleOptions& opt,
                                  double& cell) {
  cell = 0;
  if (!F->has_exact_transform()) {
    require(opt.allow_raster, Status::unsupported,
            "no closed-form transform for " + F->describe() + "; rasterized mode is disabled");
    cell = opt.raster_cell;
    if (cell <= 0) {
      const auto lo = omega.lower(), hi = omega.upper();
      double xmax = 0;
      for (int i = 0; i < omega.dim(); ++i) xmax = std::max<double>(xmax, double(hi[i] - lo[i]));
      xmax /= omega.resolution();
      cell = xmax > 0 ? std::min(0.01, 1.0 / (8.0 * xmax)) : 0.01;
    }
  }
  return IndicatorTransform(F, cell);
}

void check_inputs(const GridSet& omega, const DomainPtr& F) {
  require(F != nullptr, Status::invalid_argument, "null domain");
  require(!omega.empty(), Status::precondition, "frequency set is empty");
  require(omega.dim() == F->dim(), Status::invalid_argument, "frequency set and domain differ in dimension");
  check_in_cell(*F, omega.resolution());
}

}  // namespace

ConcentrationMatrix assemble(const GridSet& omega, const DomainPtr& F, const AssembleOptions& opt) {
  check_inputs(omega, F);
  const std::size_t n = omega.size();
  require(n <= opt.cap, Status::cap_exceeded,
          "frequency set has " + std::to_string(n) + " points, above the cap of " + std::to_string(opt.cap));
  double cell = 0;
  const auto ft = make_transform(omega, F, opt, cell);
  const DifferenceTable tab(omega, ft);

  ConcentrationMatrix m;
  m.omega = omega;
  m.F = F;
  m.n = n;
  m.exact = cell <= 0;
  m.cell = cell;
  m.a.resize(n * n);
  const double scale = std::pow(omega.resolution(), -omega.dim());
  double vmax = 0, imax = 0;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = j; i < n; ++i) {
      const auto v = scale * tab.at(omega.point(i), omega.point(j));
      vmax = std::max(vmax, std::abs(v));
      imax = std::max(imax, std::abs(v.imag()));
      m.a[i + j * n] = v;
      m.a[j + i * n] = std::conj(v);
    }
  for (std::size_t i = 0; i < n; ++i) m.a[i + i * n] = m.a[i + i * n].real();
  m.real = imax <= 1e-14 * vmax;
  if (m.real)
    for (auto& v : m.a) v = v.real();
  return m;
}

TraceStats trace_stats(const std::vector<std::complex<double>>& a, std::size_t n) {
  TraceStats t;
  for (std::size_t i = 0; i < n; ++i) t.trace += a[i + i * n].real();
  for (const auto& v : a) t.trace_sq += std::norm(v);
  return t;
}

TraceStats trace_stats(const ConcentrationMatrix& m) { return trace_stats(m.a, m.n); }

namespace {

bool even_domain(const Domain& F) {
  const auto& p = F.params();
  switch (F.kind()) {
    case Kind::box:
      for (int i = 0; i < F.dim(); ++i)
        if (p[i] != -p[F.dim() + i]) return false;
      return true;
    case Kind::ball:
    case Kind::annulus:
    case Kind::box_minus_ball:
      return true;
    case Kind::finite_union: {
      for (const auto& k : F.children())
        if (!even_domain(*k)) return false;
      return true;
    }
    case Kind::dilation:
      return even_domain(*F.children()[0]);
    case Kind::shift:
      for (double v : p)
        if (v != 0) return false;
      return even_domain(*F.children()[0]);
    default:
      return false;
  }
}

}  // namespace

bool reflection_symmetric(const GridSet& omega, const Domain& F) {
  if (!F.has_exact_transform() || !even_domain(F)) return false;
  const int d = omega.dim();
  std::vector<Index> q(d);
  for (std::size_t i = 0; i < omega.size(); ++i)
    for (int a = 0; a < d; ++a) {
      std::copy(omega.point(i), omega.point(i) + d, q.begin());
      q[a] = -q[a];
      if (!omega.contains(q.data())) return false;
    }
  return true;
}

ParityBlocks assemble_parity_blocks(const GridSet& omega, const DomainPtr& F, const AssembleOptions& opt) {
  check_inputs(omega, F);
  require(reflection_symmetric(omega, *F), Status::precondition,
          "parity reduction needs a frequency set and domain symmetric under every coordinate reflection");
  const int d = omega.dim();
  const IndicatorTransform ft(F, 0);
  const DifferenceTable tab(omega, ft);
  const double scale = std::pow(omega.resolution(), -d);

  std::vector<std::size_t> reps;
  for (std::size_t i = 0; i < omega.size(); ++i) {
    bool nonneg = true;
    for (int a = 0; a < d; ++a) nonneg = nonneg && omega.point(i)[a] >= 0;
    if (nonneg) reps.push_back(i);
  }

  ParityBlocks out;
  std::vector<Index> q(d);
  for (int sigma = 0; sigma < (1 << d); ++sigma) {  // bit a set: odd in coordinate a
    std::vector<std::size_t> r;
    for (auto i : reps) {
      bool ok = true;
      for (int a = 0; a < d; ++a)
        if ((sigma >> a & 1) && omega.point(i)[a] == 0) ok = false;
      if (ok) r.push_back(i);
    }
    const std::size_t m = r.size();
    if (m == 0) continue;
    require(m <= opt.cap, Status::cap_exceeded,
            "parity block has " + std::to_string(m) + " points, above the cap of " + std::to_string(opt.cap));
    std::vector<double> B(m * m);
    for (std::size_t jj = 0; jj < m; ++jj) {
      const Index* pp = omega.point(r[jj]);
      int nz = 0;
      for (int a = 0; a < d; ++a) nz += pp[a] != 0;
      for (std::size_t ii = 0; ii < m; ++ii) {
        const Index* p = omega.point(r[ii]);
        int nzp = 0;
        for (int a = 0; a < d; ++a) nzp += p[a] != 0;
        double s = 0;
        for (int g = 0; g < (1 << d); ++g) {
          bool dup = false;
          double chi = 1;
          for (int a = 0; a < d; ++a) {
            if (g >> a & 1) {
              if (pp[a] == 0) dup = true;
              q[a] = -pp[a];
              if (sigma >> a & 1) chi = -chi;
            } else {
              q[a] = pp[a];
            }
          }
          if (dup) continue;
          s += chi * tab.at(p, q.data()).real();
        }
        B[ii + jj * m] = scale * s * std::sqrt(std::ldexp(1.0, nzp - nz));
      }
    }
    // Symmetrize against rounding.
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t i = j + 1; i < m; ++i) {
        const double v = 0.5 * (B[i + j * m] + B[j + i * m]);
        B[i + j * m] = B[j + i * m] = v;
      }
    out.blocks.push_back(std::move(B));
    out.sizes.push_back(m);
    out.total += m;
  }
  require(out.total == omega.size(), Status::internal, "parity blocks do not cover the frequency set");
  return out;
}

std::vector<double> nystrom_oracle(const GridSet& omega, const Domain& F, int grid_n) {
  require(!omega.empty(), Status::precondition, "frequency set is empty");
  require(omega.dim() == F.dim(), Status::invalid_argument, "frequency set and domain differ in dimension");
  require(grid_n >= 1 && std::pow(double(grid_n), F.dim()) <= 4096.0, Status::cap_exceeded,
          "oracle grid too large: n^d must be at most 4096");
  check_in_cell(F, omega.resolution());
  const int d = F.dim();
  Nodes nodes;
  nodes.d = d;
  quadrature(F, grid_n, nodes);
  const std::size_t N = nodes.w.size(), n = omega.size();
  require(N > 0, Status::precondition, "no quadrature nodes inside the domain");
  const double L = omega.resolution();
  const double norm = std::pow(L, -0.5 * d);

  // A(x, k) = sqrt(w_x) L^{-d/2} exp(2 pi i k.x / L); the weighted kernel is A A^H.
  std::vector<std::complex<double>> A(N * n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t x = 0; x < N; ++x) {
      double ph = 0;
      for (int a = 0; a < d; ++a) ph += double(omega.point(j)[a]) * nodes.x[x * d + a];
      A[x + j * N] = std::sqrt(nodes.w[x]) * norm * std::polar(1.0, 2.0 * kPi * ph / L);
    }
  std::vector<double> ev;
  if (N <= 1024) {
    std::vector<std::complex<double>> K(N * N);
    for (std::size_t y = 0; y < N; ++y)
      for (std::size_t x = 0; x < N; ++x) {
        std::complex<double> s = 0;
        for (std::size_t j = 0; j < n; ++j) s += A[x + j * N] * std::conj(A[y + j * N]);
        K[x + y * N] = s;
      }
    ev = herm_eigenvalues(std::move(K), N);
  } else {
    std::vector<std::complex<double>> G(n * n);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) {
        std::complex<double> s = 0;
        for (std::size_t x = 0; x < N; ++x) s += std::conj(A[x + i * N]) * A[x + j * N];
        G[i + j * n] = s;
      }
    ev = herm_eigenvalues(std::move(G), n);
  }
  ev.resize(n, 0.0);
  return ev;
}

std::string matrix_csv(const ConcentrationMatrix& m) {
  std::ostringstream os;
  os.precision(17);
  os << "row,col,re,im\n";
  for (std::size_t j = 0; j < m.n; ++j)
    for (std::size_t i = 0; i < m.n; ++i) os << i << ',' << j << ',' << m(i, j).real() << ',' << m(i, j).imag() << '\n';
  return os.str();
}

}  // namespace plunge
