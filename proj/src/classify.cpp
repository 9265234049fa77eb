#include <algorithm>
#include <cmath>
#include <limits>

#include "frames.hpp"
#include "operator.hpp"
#include "spectrum.hpp"

namespace plunge {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Lower envelope of parabolas (x - pos[q])^2 + val[q], evaluated at increasing queries.
void envelope(const std::vector<double>& pos, const std::vector<double>& val, const std::vector<double>& qs,
              double* out, std::size_t out_stride) {
  std::vector<std::size_t> v;
  std::vector<double> z;
  for (std::size_t q = 0; q < pos.size(); ++q) {
    if (!std::isfinite(val[q])) continue;
    const double fq = val[q] + pos[q] * pos[q];
    while (!v.empty()) {
      const std::size_t r = v.back();
      const double s = (fq - (val[r] + pos[r] * pos[r])) / (2.0 * (pos[q] - pos[r]));
      if (s <= z.back()) {
        v.pop_back();
        z.pop_back();
      } else {
        v.push_back(q);
        z.push_back(s);
        break;
      }
    }
    if (v.empty()) {
      v.push_back(q);
      z.push_back(-kInf);
    }
  }
  std::size_t at = 0;
  for (std::size_t i = 0; i < qs.size(); ++i) {
    if (v.empty()) {
      out[i * out_stride] = kInf;
      continue;
    }
    while (at + 1 < v.size() && z[at + 1] < qs[i]) ++at;
    const double t = qs[i] - pos[v[at]];
    out[i * out_stride] = t * t + val[v[at]];
  }
}

}  // namespace

std::vector<double> scaled_distance2(const GridSet& set, const std::vector<double>& c, const std::vector<Index>& qlo,
                                     const std::vector<Index>& qhi, bool complement) {
  const int d = set.dim();
  require(!set.empty(), Status::precondition, "distance to an empty set");
  require(static_cast<int>(c.size()) == d && static_cast<int>(qlo.size()) == d, Status::invalid_argument,
          "scaling has the wrong dimension");
  auto blo = set.lower(), bhi = set.upper();
  if (complement)
    for (int a = 0; a < d; ++a) --blo[a], ++bhi[a];

  std::vector<Index> dims(d);
  double cells = 1;
  for (int a = 0; a < d; ++a) {
    dims[a] = bhi[a] - blo[a] + 1;
    cells *= double(std::max(dims[a], qhi[a] - qlo[a] + 1));
  }
  require(cells <= 1e8, Status::cap_exceeded, "distance transform grid too large");
  auto strides = [&](const std::vector<Index>& dm) {
    std::vector<Index> st(d, 1);
    for (int a = d - 2; a >= 0; --a) st[a] = st[a + 1] * dm[a + 1];
    return st;
  };
  std::vector<Index> st = strides(dims);
  std::vector<double> cur(static_cast<std::size_t>(st[0] * dims[0]), complement ? 0.0 : kInf);
  for (std::size_t i = 0; i < set.size(); ++i) {
    Index off = 0;
    for (int a = 0; a < d; ++a) off += (set.point(i)[a] - blo[a]) * st[a];
    cur[off] = complement ? kInf : 0.0;
  }

  for (int a = 0; a < d; ++a) {
    std::vector<Index> nd = dims;
    nd[a] = qhi[a] - qlo[a] + 1;
    const auto nst = strides(nd);
    std::vector<double> next(static_cast<std::size_t>(nst[0] * nd[0]));
    std::vector<double> pos(dims[a]), val(dims[a]), qs(nd[a]);
    for (Index m = 0; m < dims[a]; ++m) pos[m] = c[a] * double(blo[a] + m);
    for (Index k = 0; k < nd[a]; ++k) qs[k] = double(qlo[a] + k);
    const Index lines = static_cast<Index>(cur.size()) / dims[a];
    std::vector<Index> idx(d, 0);
    for (Index line = 0; line < lines; ++line) {
      // Decode the line's coordinates on all axes except a.
      Index r = line;
      for (int b = d - 1; b >= 0; --b) {
        if (b == a) continue;
        idx[b] = r % dims[b];
        r /= dims[b];
      }
      Index off_old = 0, off_new = 0;
      for (int b = 0; b < d; ++b)
        if (b != a) {
          off_old += idx[b] * st[b];
          off_new += idx[b] * nst[b];
        }
      for (Index m = 0; m < dims[a]; ++m) val[m] = cur[off_old + m * st[a]];
      envelope(pos, val, qs, next.data() + off_new, static_cast<std::size_t>(nst[a]));
    }
    cur.swap(next);
    dims = nd;
    st = nst;
  }

  if (complement) {
    // Lattice points outside the site box: one coordinate past a side, the rest free.
    std::vector<Index> k(d);
    for (Index off = 0; off < static_cast<Index>(cur.size()); ++off) {
      Index r = off;
      for (int a = 0; a < d; ++a) {
        k[a] = qlo[a] + r / st[a];
        r %= st[a];
      }
      double free2 = 0;
      std::vector<double> own(d);
      for (int a = 0; a < d; ++a) {
        const double t = double(k[a]) - c[a] * std::round(double(k[a]) / c[a]);
        own[a] = t * t;
        free2 += own[a];
      }
      double best = cur[off];
      for (int a = 0; a < d; ++a) {
        const double near = std::round(double(k[a]) / c[a]);
        const double mlo = std::min(near, double(blo[a] - 1));
        const double mhi = std::max(near, double(bhi[a] + 1));
        for (double m : {mlo, mhi}) {
          const double t = double(k[a]) - c[a] * m;
          best = std::min(best, free2 - own[a] + t * t);
        }
      }
      cur[off] = best;
    }
  }
  return cur;
}

JClass classify_k(const GridSet& E, const GridSet& boundary, const std::vector<double>& c, double s, Index guard) {
  const int d = E.dim();
  if (guard < 0) guard = static_cast<Index>(std::ceil(s)) + 4;
  JClass jc;
  const auto lo = E.lower(), hi = E.upper();
  jc.klo.resize(d);
  jc.khi.resize(d);
  for (int a = 0; a < d; ++a) {
    jc.klo[a] = static_cast<Index>(std::floor(c[a] * double(lo[a]) - s)) - guard;
    jc.khi[a] = static_cast<Index>(std::ceil(c[a] * double(hi[a]) + s)) + guard;
  }
  const auto din = scaled_distance2(E, c, jc.klo, jc.khi, false);
  const auto dout = scaled_distance2(E, c, jc.klo, jc.khi, true);
  const auto dbd = scaled_distance2(boundary, c, jc.klo, jc.khi, false);
  const double s2 = s * s;
  jc.label.resize(din.size());
  for (std::size_t i = 0; i < din.size(); ++i) {
    if (dout[i] >= s2) {
      jc.label[i] = Family::low;
      ++jc.low;
    } else if (din[i] >= s2) {
      jc.label[i] = Family::high;
      ++jc.high;
    } else {
      jc.label[i] = Family::med;
      ++jc.med;
      if (dbd[i] >= s2) ++jc.med_violations;
    }
  }
  return jc;
}

IndexClassification classify(const FramePartition& p, const GridSet& E, double s, Index guard) {
  require(!E.empty(), Status::precondition, "frequency set is empty");
  require(p.dim() == E.dim(), Status::invalid_argument, "partition and frequency set differ in dimension");
  require(s >= 1, Status::invalid_argument, "s must be at least 1");
  const int d = E.dim();
  const double L = E.resolution();
  const GridSet bd = discrete_boundary(E);
  IndexClassification out;
  out.p = p;
  out.s = s;
  out.E = E;
  std::vector<int> j(d);
  for (int a = 0; a < d; ++a) j[a] = p.axes[a].jmin;
  while (true) {
    bool main = true;
    std::vector<double> scale(d), c(d);
    for (int a = 0; a < d; ++a) {
      scale[a] = p.axes[a].at(j[a]).dlen;
      c[a] = scale[a] / L;
      main = main && scale[a] >= p.delta;
    }
    if (main) {
      JClass jc = classify_k(E, bd, c, s, guard);
      jc.j = j;
      jc.scale = scale;
      out.low += jc.low;
      out.med += jc.med;
      out.high += jc.high;
      out.med_violations += jc.med_violations;
      out.js.push_back(std::move(jc));
    } else {
      ++out.ring;
    }
    int a = d - 1;
    while (a >= 0 && ++j[a] > p.axes[a].jmax) j[a] = p.axes[a].jmin, --a;
    if (a < 0) break;
  }
  return out;
}

std::size_t boundary_neighbourhood_count(const GridSet& E, double s) {
  const GridSet bd = discrete_boundary(E);
  const int d = E.dim();
  auto lo = bd.lower(), hi = bd.upper();
  const Index g = static_cast<Index>(std::ceil(s)) + 1;
  for (int a = 0; a < d; ++a) lo[a] -= g, hi[a] += g;
  const auto d2 = scaled_distance2(bd, std::vector<double>(d, 1.0), lo, hi, false);
  std::size_t n = 0;
  for (double v : d2) n += v <= s * s + 1e-12;
  return n;
}

namespace {

// Per-axis transform tables t[k - klo][m - mlo] = F phi_{j,k}(m / L).
struct AxisTable {
  Index klo = 0, mlo = 0, nk = 0, nm = 0;
  std::vector<std::complex<double>> t;
  const std::complex<double>& at(Index k, Index m) const { return t[(k - klo) * nm + (m - mlo)]; }
};

std::vector<AxisTable> tables(const IndexClassification& cls, const JClass& jc, const Window& w) {
  const int d = cls.E.dim();
  const double L = cls.E.resolution();
  const auto lo = cls.E.lower(), hi = cls.E.upper();
  std::vector<AxisTable> tabs(d);
  for (int a = 0; a < d; ++a) {
    auto& T = tabs[a];
    const auto& iv = cls.p.axes[a].at(jc.j[a]);
    T.klo = jc.klo[a];
    T.nk = jc.khi[a] - jc.klo[a] + 1;
    T.mlo = lo[a];
    T.nm = hi[a] - lo[a] + 1;
    T.t.resize(static_cast<std::size_t>(T.nk * T.nm));
    for (Index k = 0; k < T.nk; ++k)
      for (Index m = 0; m < T.nm; ++m)
        T.t[k * T.nm + m] = phi_hat_1d(w, iv, static_cast<long>(T.klo + k), double(T.mlo + m) / L);
  }
  return tabs;
}

// Visit every k in the box with its flat index.
template <class F>
void for_box(const JClass& jc, F&& f) {
  const int d = static_cast<int>(jc.klo.size());
  std::vector<Index> k = jc.klo;
  std::size_t flat = 0;
  while (true) {
    f(k, flat++);
    int a = d - 1;
    while (a >= 0 && ++k[a] > jc.khi[a]) k[a] = jc.klo[a], --a;
    if (a < 0) break;
  }
}

// Sum over all m in Z of |F phi_{j,k}(m/L)|^2 restricted to a window, plus the skipped part
// when in_set is given (1D complement sums).
double axis_energy(const Window& w, const AxisInterval& iv, long k, double L, double cut, const GridSet* skip) {
  const double step = iv.dlen / L;
  const Index m0 = static_cast<Index>(std::ceil((double(k) - cut) / step));
  const Index m1 = static_cast<Index>(std::floor((double(k) + cut) / step));
  double s = 0;
  for (Index m = m0; m <= m1; ++m) {
    if (skip && skip->contains(&m)) continue;
    s += std::norm(phi_hat_1d(w, iv, k, double(m) / L));
  }
  return s;
}

}  // namespace

EnergySums energy_sums(const IndexClassification& cls, const Window& w) {
  const GridSet& E = cls.E;
  const int d = E.dim();
  const double L = E.resolution();
  const double Ld = std::pow(L, -d);
  require(w.fit_a > 0, Status::numerical, "window decay fit has no decay");
  const double p = 1.0 - w.alpha();
  const double cut = std::min(w.eta_max(), std::pow((w.fit_A + 35.0) / w.fit_a, 1.0 / p));

  EnergySums out;
  out.med_count = cls.med;
  const double small = std::pow(L, -d) * double(E.size()) * [&] {
    double all = 1, big = 1;
    for (const auto& ax : cls.p.axes) {
      all *= 2.0 * ax.W;
      big *= ax.dsum(cls.p.delta);
    }
    return std::max(0.0, all - big);
  }();
  out.high_sum += small;

  for (const auto& jc : cls.js) {
    const auto tabs = tables(cls, jc, w);
    double det = 1;
    for (double v : jc.scale) det *= v;
    std::vector<double> boxsum(E.size(), 0.0);
    for_box(jc, [&](const std::vector<Index>& k, std::size_t flat) {
      double inner = 0;
      for (std::size_t i = 0; i < E.size(); ++i) {
        double v = 1;
        for (int a = 0; a < d; ++a) v *= std::norm(tabs[a].at(k[a], E.point(i)[a]));
        boxsum[i] += v;
        inner += v;
      }
      inner *= Ld;
      const Family f = jc.label[flat];
      if (f == Family::high) {
        out.high_sum += inner;
      } else if (f == Family::low) {
        // Complement energy: direct in 1D, all-minus-inner otherwise.
        double comp;
        double tail_unit = 0;
        if (d == 1) {
          const auto& iv = cls.p.axes[0].at(jc.j[0]);
          comp = Ld * axis_energy(w, iv, static_cast<long>(k[0]), L, cut, &E);
          tail_unit = 4.0 * L * w.tail_integral(cut - iv.dlen / L);
        } else {
          double all = 1;
          for (int a = 0; a < d; ++a) {
            const auto& iv = cls.p.axes[a].at(jc.j[a]);
            all *= axis_energy(w, iv, static_cast<long>(k[a]), L, cut, nullptr);
            tail_unit += 4.0 * L * w.tail_integral(cut - iv.dlen / L);
          }
          comp = std::max(0.0, Ld * all - inner);
        }
        out.low_sum += comp;
        out.low_tail += Ld * tail_unit;
      }
    });
    for (double b : boxsum) out.high_sum += Ld * std::max(0.0, det - b);
  }
  require(out.low_tail <= 0.01 * out.low_sum || out.low_sum == 0.0, Status::numerical,
          "complement tail bound exceeds 1% of the low-family sum");
  return out;
}

IsraelCertificate israel_certificate(const GridSet& omega, const std::vector<double>& W, double s, double delta,
                                     double eps, const Window& w) {
  const int d = omega.dim();
  require(static_cast<int>(W.size()) == d, Status::invalid_argument, "box widths have the wrong dimension");
  require(eps > 0 && eps < 0.5, Status::invalid_argument, "eps must lie in (0, 1/2)");
  const double L = omega.resolution();
  for (double x : W) require(x > 0 && x <= L, Status::precondition, "box widths must lie in (0, L]");

  const auto F = Domain::box(W);
  const auto M = assemble(omega, F);
  const auto spec = eigenvalues(M);
  const auto p = partition(W, delta);
  const auto cls = classify(p, omega, s);
  const double Ld = std::pow(L, -d);
  const std::size_t n = omega.size();

  IsraelCertificate c;
  c.med = cls.med;
  c.low = cls.low;
  c.high = cls.high;
  c.conclusion_count = plunge_count(spec, eps);
  c.threshold = std::ldexp(eps * eps, d - 1);
  c.bound = std::ldexp(double(cls.med), 1 - d);

  double all = 1, big = 1;
  for (const auto& ax : p.axes) {
    all *= 2.0 * ax.W;
    big *= ax.dsum(delta);
  }
  c.small_d = Ld * double(n) * std::max(0.0, all - big);

  std::vector<std::complex<double>> a(n), y(n);
  for (const auto& jc : cls.js) {
    const auto tabs = tables(cls, jc, w);
    double det = 1;
    for (double v : jc.scale) det *= v;
    std::vector<double> boxsum(n, 0.0);
    for_box(jc, [&](const std::vector<Index>& k, std::size_t flat) {
      const Family f = jc.label[flat];
      double inner = 0;
      for (std::size_t i = 0; i < n; ++i) {
        std::complex<double> v = std::sqrt(Ld);
        for (int q = 0; q < d; ++q) v *= tabs[q].at(k[q], omega.point(i)[q]);
        a[i] = v;
        const double e = std::norm(v);
        inner += e;
        boxsum[i] += e;
      }
      if (f == Family::med) return;
      double tt = 0;
      for (std::size_t i = 0; i < n; ++i) {
        std::complex<double> s2 = 0;
        for (std::size_t q = 0; q < n; ++q) s2 += M(i, q) * a[q];
        tt += (std::conj(a[i]) * s2).real();
      }
      if (f == Family::high)
        c.high_part += std::max(tt, 0.0);
      else
        c.low_part += std::max(1.0 - 2.0 * inner + tt, 0.0);
    });
    for (double b : boxsum) c.outside_box += Ld * std::max(0.0, det - b * std::pow(L, d));
  }
  c.hypothesis_lhs = c.high_part + c.low_part + c.outside_box + c.small_d;
  c.hypothesis_met = c.hypothesis_lhs <= c.threshold;
  c.holds = !c.hypothesis_met || double(c.conclusion_count) <= c.bound;
  return c;
}

double s_from_shape(double A_s, int d, double W_max, double eta, double bE, double kappa, double eps, double alpha) {
  require(A_s > 0 && d >= 1 && W_max > 0 && eta > 0 && bE > 0 && kappa > 0, Status::invalid_argument,
          "s shape inputs must be positive");
  require(eps > 0 && eps < 0.5 && alpha > 0 && alpha < 0.5, Status::invalid_argument, "eps or alpha out of range");
  const double arg = std::pow(std::max(W_max, 1.0 / eta), d - 1) * bE / (kappa * eps);
  const double lg = std::max(std::log(arg), 1.0);
  return std::max(1.0, A_s * std::pow(lg, 1.0 / (1.0 - alpha)));
}

}  // namespace plunge
