#include "geometry.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace plunge {

namespace {

std::string num(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

// Transform of [lo, hi] along one axis.
std::complex<double> interval_ft(double lo, double hi, double xi) {
  const double w = hi - lo, c = 0.5 * (lo + hi);
  return w * sinc(kPi * w * xi) * std::polar(1.0, -2.0 * kPi * c * xi);
}

double ball_ft(int d, double r, const double* xi) {
  double rho2 = 0;
  for (int i = 0; i < d; ++i) rho2 += xi[i] * xi[i];
  const double rho = std::sqrt(rho2);
  const double z = 2.0 * kPi * r * rho;
  switch (d) {
    case 1:
      return 2.0 * r * sinc(z);
    case 2:
      if (z < 1e-4) return kPi * r * r * (1.0 - z * z / 8.0);
      return r * std::cyl_bessel_j(1.0, z) / rho;
    case 3: {
      double f;
      if (z < 1e-2) {
        const double z2 = z * z;
        f = 1.0 / 3.0 - z2 / 30.0 + z2 * z2 / 840.0;
      } else {
        f = (std::sin(z) - z * std::cos(z)) / (z * z * z);
      }
      return 4.0 * kPi * r * r * r * f;
    }
    default:
      if (z < 1e-8) return ball_volume(d, r);
      return std::pow(r, 0.5 * d) * std::cyl_bessel_j(0.5 * d, z) / std::pow(rho, 0.5 * d);
  }
}

// Squared distance from the origin to the nearest / farthest point of a box.
double near2(const Box& b) {
  double s = 0;
  for (int i = 0; i < b.dim(); ++i) {
    const double t = b.lo[i] > 0 ? b.lo[i] : (b.hi[i] < 0 ? b.hi[i] : 0.0);
    s += t * t;
  }
  return s;
}

double far2(const Box& b) {
  double s = 0;
  for (int i = 0; i < b.dim(); ++i) {
    const double t = std::max(std::abs(b.lo[i]), std::abs(b.hi[i]));
    s += t * t;
  }
  return s;
}

Box cube(int d, double w) { return Box{std::vector<double>(d, -0.5 * w), std::vector<double>(d, 0.5 * w)}; }

bool box_inside(const Box& inner, const Box& outer) {
  for (int i = 0; i < inner.dim(); ++i)
    if (inner.lo[i] < outer.lo[i] || inner.hi[i] > outer.hi[i]) return false;
  return true;
}

std::optional<Box> intersect(const Box& a, const Box& b) {
  Box r = a;
  for (int i = 0; i < a.dim(); ++i) {
    r.lo[i] = std::max(a.lo[i], b.lo[i]);
    r.hi[i] = std::min(a.hi[i], b.hi[i]);
    if (r.lo[i] >= r.hi[i]) return std::nullopt;
  }
  return r;
}

// Visit a tensor grid of n^d points spanning the closed box (faces included when closed).
template <class F>
bool any_sample(const Box& b, int n, bool closed, F&& f) {
  const int d = b.dim();
  std::vector<int> idx(d, 0);
  std::vector<double> x(d);
  while (true) {
    for (int i = 0; i < d; ++i) {
      const double t = closed ? (n > 1 ? double(idx[i]) / (n - 1) : 0.5) : (idx[i] + 0.5) / n;
      x[i] = b.lo[i] + t * (b.hi[i] - b.lo[i]);
    }
    if (f(x.data())) return true;
    int i = 0;
    while (i < d && ++idx[i] == n) idx[i++] = 0;
    if (i == d) return false;
  }
}

}  // namespace

double Box::volume() const {
  double v = 1;
  for (int i = 0; i < dim(); ++i) v *= hi[i] - lo[i];
  return v;
}

bool Box::overlaps_interior(const Box& o) const {
  for (int i = 0; i < dim(); ++i)
    if (std::max(lo[i], o.lo[i]) >= std::min(hi[i], o.hi[i])) return false;
  return true;
}

std::vector<Box> subtract(const Box& a, const Box& b) {
  if (!a.overlaps_interior(b)) return {a};
  std::vector<Box> out;
  Box rest = a;
  for (int i = 0; i < a.dim(); ++i) {
    if (b.lo[i] > rest.lo[i]) {
      Box p = rest;
      p.hi[i] = b.lo[i];
      out.push_back(p);
      rest.lo[i] = b.lo[i];
    }
    if (b.hi[i] < rest.hi[i]) {
      Box p = rest;
      p.lo[i] = b.hi[i];
      out.push_back(p);
      rest.hi[i] = b.hi[i];
    }
  }
  return out;
}

std::vector<Box> subtract(const Box& a, const std::vector<Box>& bs) {
  std::vector<Box> cur{a};
  for (const auto& b : bs) {
    std::vector<Box> next;
    for (const auto& c : cur) {
      auto parts = subtract(c, b);
      next.insert(next.end(), parts.begin(), parts.end());
    }
    cur.swap(next);
    if (cur.empty()) break;
  }
  return cur;
}

double ball_volume(int d, double r) { return std::pow(kPi, 0.5 * d) * std::pow(r, d) / std::tgamma(0.5 * d + 1.0); }

double sphere_area(int d, double r) {
  if (d == 1) return 2.0;
  return 2.0 * std::pow(kPi, 0.5 * d) * std::pow(r, d - 1) / std::tgamma(0.5 * d);
}

// ---------------------------------------------------------------- Domain

DomainPtr Domain::box(std::vector<double> widths) {
  require(!widths.empty(), Status::invalid_argument, "box needs at least one width");
  for (double w : widths) require(w > 0 && std::isfinite(w), Status::invalid_argument, "box widths must be positive");
  Box b{widths, widths};
  for (std::size_t i = 0; i < widths.size(); ++i) {
    b.lo[i] = -0.5 * widths[i];
    b.hi[i] = 0.5 * widths[i];
  }
  return box(std::move(b));
}

DomainPtr Domain::box(Box b) {
  require(!b.lo.empty() && b.lo.size() == b.hi.size(), Status::invalid_argument, "malformed box");
  for (int i = 0; i < b.dim(); ++i) require(b.lo[i] < b.hi[i], Status::invalid_argument, "empty box");
  std::shared_ptr<Domain> p(new Domain);
  p->d_ = b.dim();
  p->kind_ = Kind::box;
  p->par_ = b.lo;
  p->par_.insert(p->par_.end(), b.hi.begin(), b.hi.end());
  p->finish();
  return p;
}

DomainPtr Domain::ball(int d, double r) {
  require(d >= 1, Status::invalid_argument, "dimension must be positive");
  require(r > 0, Status::invalid_argument, "ball radius must be positive");
  std::shared_ptr<Domain> p(new Domain);
  p->d_ = d;
  p->kind_ = Kind::ball;
  p->par_ = {r};
  p->finish();
  return p;
}

DomainPtr Domain::annulus(int d, double r0, double r1) {
  require(d >= 1, Status::invalid_argument, "dimension must be positive");
  require(r0 > 0 && r0 < r1, Status::invalid_argument, "annulus needs 0 < r0 < r1");
  std::shared_ptr<Domain> p(new Domain);
  p->d_ = d;
  p->kind_ = Kind::annulus;
  p->par_ = {r0, r1};
  p->finish();
  return p;
}

DomainPtr Domain::box_minus_ball(int d, double w, double r) {
  require(d >= 1, Status::invalid_argument, "dimension must be positive");
  require(w > 0 && r > 0 && r < 0.5 * w, Status::invalid_argument, "boxminusball needs 0 < r < w/2");
  std::shared_ptr<Domain> p(new Domain);
  p->d_ = d;
  p->kind_ = Kind::box_minus_ball;
  p->par_ = {w, r};
  p->finish();
  return p;
}

DomainPtr Domain::l_shape(double w, double notch) {
  require(w > 0 && notch > 0 && notch < w, Status::invalid_argument, "lshape needs 0 < notch < w");
  std::shared_ptr<Domain> p(new Domain);
  p->d_ = 2;
  p->kind_ = Kind::l_shape;
  p->par_ = {w, notch};
  p->finish();
  return p;
}

DomainPtr Domain::unite(std::vector<DomainPtr> parts, int d) {
  if (!parts.empty()) d = parts.front()->dim();
  require(d >= 1, Status::invalid_argument, "empty union needs a dimension");
  for (const auto& q : parts) require(q && q->dim() == d, Status::invalid_argument, "union parts differ in dimension");
  std::shared_ptr<Domain> p(new Domain);
  p->d_ = d;
  p->kind_ = Kind::finite_union;
  p->kids_ = std::move(parts);
  p->finish();
  return p;
}

DomainPtr Domain::dilate(DomainPtr base, double t) {
  require(base != nullptr, Status::invalid_argument, "null domain");
  require(t > 0 && std::isfinite(t), Status::invalid_argument, "dilation factor must be positive");
  std::shared_ptr<Domain> p(new Domain);
  p->d_ = base->dim();
  p->kind_ = Kind::dilation;
  p->par_ = {t};
  p->kids_ = {std::move(base)};
  p->finish();
  return p;
}

DomainPtr Domain::shift(DomainPtr base, std::vector<double> v) {
  require(base != nullptr, Status::invalid_argument, "null domain");
  require(static_cast<int>(v.size()) == base->dim(), Status::invalid_argument, "shift vector has wrong length");
  std::shared_ptr<Domain> p(new Domain);
  p->d_ = base->dim();
  p->kind_ = Kind::shift;
  p->par_ = std::move(v);
  p->kids_ = {std::move(base)};
  p->finish();
  return p;
}

DomainPtr Domain::predicate(int d, Predicate pr, Box bbox, std::string name) {
  require(d >= 1 && bbox.dim() == d, Status::invalid_argument, "predicate bounding box has wrong dimension");
  std::shared_ptr<Domain> p(new Domain);
  p->d_ = d;
  p->kind_ = Kind::predicate;
  p->pred_ = std::move(pr);
  p->name_ = std::move(name);
  p->bbox_ = std::move(bbox);
  p->finish();
  return p;
}

void Domain::finish() {
  const int d = d_;
  switch (kind_) {
    case Kind::box: {
      bbox_.lo.assign(par_.begin(), par_.begin() + d);
      bbox_.hi.assign(par_.begin() + d, par_.end());
      vol_ = bbox_.volume();
      double s = 0;
      for (int i = 0; i < d; ++i) {
        double prod = 1;
        for (int j = 0; j < d; ++j)
          if (j != i) prod *= bbox_.hi[j] - bbox_.lo[j];
        s += prod;
      }
      bm_ = 2.0 * s;
      exact_ft_ = true;
      break;
    }
    case Kind::ball:
      bbox_ = cube(d, 2 * par_[0]);
      vol_ = ball_volume(d, par_[0]);
      bm_ = sphere_area(d, par_[0]);
      exact_ft_ = true;
      break;
    case Kind::annulus:
      bbox_ = cube(d, 2 * par_[1]);
      vol_ = ball_volume(d, par_[1]) - ball_volume(d, par_[0]);
      bm_ = sphere_area(d, par_[1]) + sphere_area(d, par_[0]);
      exact_ft_ = true;
      break;
    case Kind::box_minus_ball: {
      const double w = par_[0], r = par_[1];
      bbox_ = cube(d, w);
      vol_ = std::pow(w, d) - ball_volume(d, r);
      bm_ = 2.0 * d * std::pow(w, d - 1) + sphere_area(d, r);
      exact_ft_ = true;
      break;
    }
    case Kind::l_shape: {
      const double w = par_[0], n = par_[1];
      bbox_ = cube(2, w);
      vol_ = w * w - n * n;
      bm_ = 4.0 * w;
      exact_ft_ = true;
      break;
    }
    case Kind::finite_union: {
      if (kids_.empty()) {
        bbox_ = Box{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
        vol_ = 0.0;
        bm_ = 0.0;
        exact_ft_ = true;
        break;
      }
      bbox_ = kids_[0]->bbox();
      for (const auto& k : kids_)
        for (int i = 0; i < d; ++i) {
          bbox_.lo[i] = std::min(bbox_.lo[i], k->bbox().lo[i]);
          bbox_.hi[i] = std::max(bbox_.hi[i], k->bbox().hi[i]);
        }
      // Interior-disjoint parts add up in volume and transform; boundaries add
      // up only when the closures are apart.
      // Bounding boxes decide both; overlapping boxes are treated as overlapping parts.
      bool disjoint = true, separated = true;
      for (std::size_t a = 0; a < kids_.size(); ++a)
        for (std::size_t b = a + 1; b < kids_.size(); ++b) {
          const Box& A = kids_[a]->bbox();
          const Box& B = kids_[b]->bbox();
          if (A.overlaps_interior(B)) disjoint = false;
          bool touch = true;
          for (int i = 0; i < d; ++i)
            if (A.hi[i] < B.lo[i] || B.hi[i] < A.lo[i]) touch = false;
          if (touch) separated = false;
        }
      bool all_exact = true, all_vol = true, all_bm = true;
      double v = 0, s = 0;
      for (const auto& k : kids_) {
        all_exact = all_exact && k->has_exact_transform();
        if (k->volume()) v += *k->volume(); else all_vol = false;
        if (k->boundary_measure()) s += *k->boundary_measure(); else all_bm = false;
      }
      exact_ft_ = disjoint && all_exact;
      if (disjoint && all_vol) vol_ = v;
      if (disjoint && separated && all_bm) bm_ = s;
      break;
    }
    case Kind::dilation: {
      const double t = par_[0];
      const auto& k = kids_[0];
      bbox_ = k->bbox();
      for (int i = 0; i < d; ++i) {
        bbox_.lo[i] *= t;
        bbox_.hi[i] *= t;
      }
      if (k->volume()) vol_ = *k->volume() * std::pow(t, d);
      if (k->boundary_measure()) bm_ = *k->boundary_measure() * std::pow(t, d - 1);
      exact_ft_ = k->has_exact_transform();
      break;
    }
    case Kind::shift: {
      const auto& k = kids_[0];
      bbox_ = k->bbox();
      for (int i = 0; i < d; ++i) {
        bbox_.lo[i] += par_[i];
        bbox_.hi[i] += par_[i];
      }
      vol_ = k->volume();
      bm_ = k->boundary_measure();
      exact_ft_ = k->has_exact_transform();
      break;
    }
    case Kind::predicate:
      exact_ft_ = false;
      break;
  }
}

bool Domain::contains(const double* x) const {
  const int d = d_;
  switch (kind_) {
    case Kind::box:
      for (int i = 0; i < d; ++i)
        if (x[i] < par_[i] || x[i] > par_[d + i]) return false;
      return true;
    case Kind::ball: {
      double s = 0;
      for (int i = 0; i < d; ++i) s += x[i] * x[i];
      return s <= par_[0] * par_[0];
    }
    case Kind::annulus: {
      double s = 0;
      for (int i = 0; i < d; ++i) s += x[i] * x[i];
      return s >= par_[0] * par_[0] && s <= par_[1] * par_[1];
    }
    case Kind::box_minus_ball: {
      double s = 0;
      for (int i = 0; i < d; ++i) {
        if (std::abs(x[i]) > 0.5 * par_[0]) return false;
        s += x[i] * x[i];
      }
      return s >= par_[1] * par_[1];
    }
    case Kind::l_shape: {
      const double h = 0.5 * par_[0], a = h - par_[1];
      if (std::abs(x[0]) > h || std::abs(x[1]) > h) return false;
      return !(x[0] > a && x[1] > a);
    }
    case Kind::finite_union:
      for (const auto& k : kids_)
        if (k->contains(x)) return true;
      return false;
    case Kind::dilation: {
      std::vector<double> y(x, x + d);
      for (auto& v : y) v /= par_[0];
      return kids_[0]->contains(y.data());
    }
    case Kind::shift: {
      std::vector<double> y(x, x + d);
      for (int i = 0; i < d; ++i) y[i] -= par_[i];
      return kids_[0]->contains(y.data());
    }
    case Kind::predicate:
      for (int i = 0; i < d; ++i)
        if (x[i] < bbox_.lo[i] || x[i] > bbox_.hi[i]) return false;
      return pred_(x);
  }
  return false;
}

std::complex<double> Domain::transform(const double* xi) const {
  require(exact_ft_, Status::unsupported, "no closed-form transform for " + describe());
  const int d = d_;
  switch (kind_) {
    case Kind::box: {
      std::complex<double> v = 1.0;
      for (int i = 0; i < d; ++i) v *= interval_ft(par_[i], par_[d + i], xi[i]);
      return v;
    }
    case Kind::ball:
      return ball_ft(d, par_[0], xi);
    case Kind::annulus:
      return ball_ft(d, par_[1], xi) - ball_ft(d, par_[0], xi);
    case Kind::box_minus_ball: {
      std::complex<double> v = 1.0;
      for (int i = 0; i < d; ++i) v *= interval_ft(-0.5 * par_[0], 0.5 * par_[0], xi[i]);
      return v - ball_ft(d, par_[1], xi);
    }
    case Kind::l_shape: {
      const double h = 0.5 * par_[0], a = h - par_[1];
      return interval_ft(-h, h, xi[0]) * interval_ft(-h, h, xi[1]) - interval_ft(a, h, xi[0]) * interval_ft(a, h, xi[1]);
    }
    case Kind::finite_union: {
      std::complex<double> v = 0.0;
      for (const auto& k : kids_) v += k->transform(xi);
      return v;
    }
    case Kind::dilation: {
      const double t = par_[0];
      std::vector<double> y(xi, xi + d);
      for (auto& v : y) v *= t;
      return std::pow(t, d) * kids_[0]->transform(y.data());
    }
    case Kind::shift: {
      double ph = 0;
      for (int i = 0; i < d; ++i) ph += par_[i] * xi[i];
      return std::polar(1.0, -2.0 * kPi * ph) * kids_[0]->transform(xi);
    }
    case Kind::predicate:
      break;
  }
  fail(Status::unsupported, "no closed-form transform");
}

bool Domain::contains_box(const Box& b) const {
  const int d = d_;
  switch (kind_) {
    case Kind::box:
      return box_inside(b, bbox_);
    case Kind::ball:
      return far2(b) <= par_[0] * par_[0];
    case Kind::annulus:
      return far2(b) <= par_[1] * par_[1] && near2(b) >= par_[0] * par_[0];
    case Kind::box_minus_ball:
      return box_inside(b, bbox_) && near2(b) >= par_[1] * par_[1];
    case Kind::l_shape: {
      if (!box_inside(b, bbox_)) return false;
      const double a = 0.5 * par_[0] - par_[1];
      return b.hi[0] <= a || b.hi[1] <= a;
    }
    case Kind::finite_union:
      for (const auto& k : kids_)
        if (k->contains_box(b)) return true;
      if (!box_inside(b, bbox_)) return false;
      return !any_sample(b, 17, true, [&](const double* x) { return !contains(x); });
    case Kind::dilation: {
      Box c = b;
      for (int i = 0; i < d; ++i) {
        c.lo[i] /= par_[0];
        c.hi[i] /= par_[0];
      }
      return kids_[0]->contains_box(c);
    }
    case Kind::shift: {
      Box c = b;
      for (int i = 0; i < d; ++i) {
        c.lo[i] -= par_[i];
        c.hi[i] -= par_[i];
      }
      return kids_[0]->contains_box(c);
    }
    case Kind::predicate:
      if (!box_inside(b, bbox_)) return false;
      return !any_sample(b, 17, true, [&](const double* x) { return !contains(x); });
  }
  return false;
}

bool Domain::meets_box_interior(const Box& b) const {
  const int d = d_;
  switch (kind_) {
    case Kind::box:
      return b.overlaps_interior(bbox_);
    case Kind::ball:
      return near2(b) < par_[0] * par_[0];
    case Kind::annulus:
      return near2(b) < par_[1] * par_[1] && far2(b) > par_[0] * par_[0];
    case Kind::box_minus_ball: {
      auto c = intersect(b, bbox_);
      return c && far2(*c) > par_[1] * par_[1];
    }
    case Kind::l_shape: {
      auto c = intersect(b, bbox_);
      const double a = 0.5 * par_[0] - par_[1];
      return c && (c->lo[0] < a || c->lo[1] < a);
    }
    case Kind::finite_union:
      for (const auto& k : kids_)
        if (k->meets_box_interior(b)) return true;
      return false;
    case Kind::dilation: {
      Box c = b;
      for (int i = 0; i < d; ++i) {
        c.lo[i] /= par_[0];
        c.hi[i] /= par_[0];
      }
      return kids_[0]->meets_box_interior(c);
    }
    case Kind::shift: {
      Box c = b;
      for (int i = 0; i < d; ++i) {
        c.lo[i] -= par_[i];
        c.hi[i] -= par_[i];
      }
      return kids_[0]->meets_box_interior(c);
    }
    case Kind::predicate: {
      auto c = intersect(b, bbox_);
      if (!c) return false;
      double w = 0;
      for (int i = 0; i < d; ++i) w = std::max(w, c->hi[i] - c->lo[i]);
      const int n = std::max(2, static_cast<int>(std::ceil(w * 16.0)));
      return any_sample(*c, n, false, [&](const double* x) { return contains(x); });
    }
  }
  return false;
}

std::string Domain::describe() const {
  std::ostringstream os;
  auto list = [&](const std::vector<double>& v, std::size_t from, std::size_t to) {
    for (std::size_t i = from; i < to; ++i) os << (i > from ? "," : "") << num(v[i]);
  };
  switch (kind_) {
    case Kind::box: {
      bool centred = true;
      for (int i = 0; i < d_; ++i) centred = centred && par_[i] == -par_[d_ + i];
      std::vector<double> w(d_), c(d_);
      for (int i = 0; i < d_; ++i) {
        w[i] = par_[d_ + i] - par_[i];
        c[i] = 0.5 * (par_[d_ + i] + par_[i]);
      }
      if (!centred) os << "shift(";
      os << "box(";
      list(w, 0, w.size());
      os << ")";
      if (!centred) {
        os << ",";
        list(c, 0, c.size());
        os << ")";
      }
      break;
    }
    case Kind::ball:
      os << "ball(" << num(par_[0]) << ")";
      break;
    case Kind::annulus:
      os << "annulus(" << num(par_[0]) << "," << num(par_[1]) << ")";
      break;
    case Kind::box_minus_ball:
      os << "boxminusball(" << num(par_[0]) << "," << num(par_[1]) << ")";
      break;
    case Kind::l_shape:
      os << "lshape(" << num(par_[0]) << "," << num(par_[1]) << ")";
      break;
    case Kind::finite_union:
      os << "union(";
      for (std::size_t i = 0; i < kids_.size(); ++i) os << (i ? ";" : "") << kids_[i]->describe();
      os << ")";
      break;
    case Kind::dilation:
      os << "dilate(" << kids_[0]->describe() << "," << num(par_[0]) << ")";
      break;
    case Kind::shift:
      os << "shift(" << kids_[0]->describe() << ",";
      list(par_, 0, par_.size());
      os << ")";
      break;
    case Kind::predicate:
      os << name_;
      break;
  }
  return os.str();
}

bool inside_cell(const Box& b, double L) {
  for (int i = 0; i < b.dim(); ++i)
    if (!(b.lo[i] > -0.5 * L && b.hi[i] < 0.5 * L)) return false;
  return true;
}

// ---------------------------------------------------------------- GridSet

GridSet::GridSet(int d, double L, std::vector<Index> flat) : d_(d), L_(L) {
  require(d >= 1, Status::invalid_argument, "grid dimension must be positive");
  require(L > 0, Status::invalid_argument, "resolution must be positive");
  require(flat.size() % d == 0, Status::invalid_argument, "flat point list length is not a multiple of d");
  const std::size_t n = flat.size() / d;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto less = [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(flat.begin() + a * d, flat.begin() + (a + 1) * d, flat.begin() + b * d,
                                        flat.begin() + (b + 1) * d);
  };
  std::sort(order.begin(), order.end(), less);
  pts_.reserve(flat.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto* p = flat.data() + order[i] * d;
    if (i > 0 && std::equal(p, p + d, pts_.end() - d)) continue;
    pts_.insert(pts_.end(), p, p + d);
  }
  n_ = pts_.size() / d;
}

bool GridSet::contains(const Index* k) const {
  std::size_t lo = 0, hi = n_;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    const Index* p = point(mid);
    if (std::lexicographical_compare(p, p + d_, k, k + d_))
      lo = mid + 1;
    else
      hi = mid;
  }
  return lo < n_ && std::equal(k, k + d_, point(lo));
}

std::vector<Index> GridSet::lower() const {
  std::vector<Index> v(d_, 0);
  for (std::size_t i = 0; i < n_; ++i)
    for (int a = 0; a < d_; ++a) v[a] = i ? std::min(v[a], point(i)[a]) : point(i)[a];
  return v;
}

std::vector<Index> GridSet::upper() const {
  std::vector<Index> v(d_, 0);
  for (std::size_t i = 0; i < n_; ++i)
    for (int a = 0; a < d_; ++a) v[a] = i ? std::max(v[a], point(i)[a]) : point(i)[a];
  return v;
}

GridSet GridSet::translated(const std::vector<Index>& v) const {
  std::vector<Index> f = pts_;
  for (std::size_t i = 0; i < n_; ++i)
    for (int a = 0; a < d_; ++a) f[i * d_ + a] += v[a];
  return GridSet(d_, L_, std::move(f));
}

GridSet discretize(const Domain& dom, double L) {
  require(L > 0 && std::isfinite(L), Status::invalid_argument, "resolution must be positive");
  const int d = dom.dim();
  const Box& b = dom.bbox();
  std::vector<Index> lo(d), hi(d);
  double count = 1;
  for (int i = 0; i < d; ++i) {
    require(std::isfinite(b.lo[i]) && std::isfinite(b.hi[i]), Status::precondition, "unbounded domain");
    lo[i] = static_cast<Index>(std::ceil(b.lo[i] * L - 1e-9)) - 1;
    hi[i] = static_cast<Index>(std::floor(b.hi[i] * L + 1e-9)) + 1;
    count *= double(hi[i] - lo[i] + 1);
  }
  require(count < 5e8, Status::cap_exceeded, "lattice enumeration too large");
  std::vector<Index> out;
  std::vector<Index> k = lo;
  std::vector<double> x(d);
  while (true) {
    for (int i = 0; i < d; ++i) x[i] = static_cast<double>(k[i]) / L;
    if (dom.contains(x.data())) out.insert(out.end(), k.begin(), k.end());
    int i = d - 1;
    while (i >= 0 && ++k[i] > hi[i]) k[i] = lo[i], --i;
    if (i < 0) break;
  }
  return GridSet(d, L, std::move(out));
}

GridSet discrete_boundary(const GridSet& s) {
  require(!s.empty(), Status::precondition, "discrete boundary of an empty set");
  const int d = s.dim();
  std::vector<Index> out, nb(d);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const Index* p = s.point(i);
    bool edge = false;
    for (int a = 0; a < d && !edge; ++a)
      for (int sgn = -1; sgn <= 1 && !edge; sgn += 2) {
        std::copy(p, p + d, nb.begin());
        nb[a] += sgn;
        edge = !s.contains(nb.data());
      }
    if (edge) out.insert(out.end(), p, p + d);
  }
  return GridSet(d, s.resolution(), std::move(out));
}

// ---------------------------------------------------------------- Ahlfors

RegularityReport discrete_ahlfors(const GridSet& bd) {
  require(!bd.empty(), Status::precondition, "boundary is empty");
  const int d = bd.dim();
  require(d >= 2, Status::invalid_argument, "discrete Ahlfors constant needs d >= 2");
  const Index B = static_cast<Index>(bd.size());
  Index nmax = 1;
  auto pw = [&](Index n) {
    double v = 1;
    for (int i = 0; i < d - 1; ++i) v *= double(n);
    return v;
  };
  while (pw(nmax) < double(B)) ++nmax;

  const auto lo = bd.lower(), hi = bd.upper();
  std::vector<Index> ext(d);
  double cells = 1;
  for (int a = 0; a < d; ++a) {
    ext[a] = hi[a] - lo[a] + 2;
    cells *= double(ext[a]);
  }
  const bool use_prefix = d <= 3 && cells <= 8e7;
  // Inclusive prefix sums on the bounding box, padded by one leading zero slab.
  std::vector<std::int32_t> pre;
  std::vector<Index> stride(d, 1);
  if (use_prefix) {
    for (int a = d - 2; a >= 0; --a) stride[a] = stride[a + 1] * ext[a + 1];
    pre.assign(static_cast<std::size_t>(cells), 0);
    for (std::size_t i = 0; i < bd.size(); ++i) {
      Index off = 0;
      for (int a = 0; a < d; ++a) off += (bd.point(i)[a] - lo[a] + 1) * stride[a];
      pre[off] = 1;
    }
    for (int a = 0; a < d; ++a)
      for (Index off = 0; off < static_cast<Index>(pre.size()); ++off)
        if ((off / stride[a]) % ext[a] > 0) pre[off] += pre[off - stride[a]];
  }
  auto prefix = [&](const std::vector<Index>& c) -> std::int64_t {
    Index off = 0;
    for (int a = 0; a < d; ++a) {
      const Index v = std::clamp<Index>(c[a] - lo[a] + 1, 0, ext[a] - 1);
      off += v * stride[a];
    }
    return pre[off];
  };
  auto count = [&](const Index* k, Index n) -> std::int64_t {
    std::vector<Index> a0(d), a1(d);
    for (int a = 0; a < d; ++a) {
      a0[a] = k[a] - n / 2;
      a1[a] = k[a] + (n + 1) / 2 - 1;
    }
    if (!use_prefix) {
      std::int64_t c = 0;
      for (std::size_t i = 0; i < bd.size(); ++i) {
        bool in = true;
        for (int a = 0; a < d && in; ++a) in = bd.point(i)[a] >= a0[a] && bd.point(i)[a] <= a1[a];
        c += in;
      }
      return c;
    }
    std::int64_t total = 0;
    std::vector<Index> c(d);
    for (int mask = 0; mask < (1 << d); ++mask) {
      int bits = 0;
      for (int a = 0; a < d; ++a) {
        if (mask & (1 << a)) {
          c[a] = a0[a] - 1;
          ++bits;
        } else {
          c[a] = a1[a];
        }
      }
      total += (bits % 2 ? -1 : 1) * prefix(c);
    }
    return total;
  };

  RegularityReport rep;
  rep.mode = RegularityReport::Mode::discrete_exact;
  rep.eta = double(nmax);
  rep.kappa = std::numeric_limits<double>::infinity();
  rep.per_point.assign(bd.size(), std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < bd.size(); ++i) {
    const Index* k = bd.point(i);
    for (Index n = 1; n <= nmax; ++n) {
      const double ratio = double(count(k, n)) / pw(n);
      rep.per_point[i] = std::min(rep.per_point[i], ratio);
      if (ratio < rep.kappa) {
        rep.kappa = ratio;
        rep.argmin_point.assign(k, k + d);
        rep.argmin_n = n;
      }
    }
  }
  return rep;
}

BoundarySamples raster_boundary(const Domain& dom, double h) {
  const int d = dom.dim();
  const Box& b = dom.bbox();
  double diam2 = 0;
  for (int i = 0; i < d; ++i) diam2 += (b.hi[i] - b.lo[i]) * (b.hi[i] - b.lo[i]);
  const double diam = std::sqrt(diam2);
  require(d >= 1 && d <= 3, Status::unsupported, "raster boundary supports d <= 3");
  require(h > 0, Status::invalid_argument, "resolution must be positive");
  require(h <= diam / 8.0, Status::precondition, "resolution coarser than 1/8 of the bounding-box diameter");

  std::vector<Index> n(d), stride(d, 1);
  std::vector<double> o(d);
  double cells = 1;
  for (int i = 0; i < d; ++i) {
    n[i] = static_cast<Index>(std::ceil((b.hi[i] - b.lo[i]) / h)) + 3;
    // Irrational offset keeps grid vertices off axis-aligned faces.
    o[i] = 0.5 * (b.lo[i] + b.hi[i]) - 0.5 * double(n[i] - 1) * h + 0.2360679775 * h;
    cells *= double(n[i]);
  }
  require(cells <= 6e7, Status::cap_exceeded, "raster grid too large for this resolution");
  for (int i = d - 2; i >= 0; --i) stride[i] = stride[i + 1] * n[i + 1];
  const Index N = static_cast<Index>(cells);

  auto coords = [&](Index c, double* x) {
    for (int i = 0; i < d; ++i) {
      x[i] = o[i] + double((c / stride[i]) % n[i]) * h;
    }
  };
  std::vector<std::uint8_t> in(N);
  std::vector<double> x(d), y(d);
  for (Index c = 0; c < N; ++c) {
    coords(c, x.data());
    in[c] = dom.contains(x.data());
  }

  // Boundary crossing on the grid edge between an inside and an outside vertex.
  std::unordered_map<std::uint64_t, std::array<double, 3>> cache;
  auto crossing = [&](Index pin, Index pout) {
    const std::uint64_t key = std::uint64_t(pin) * std::uint64_t(N) + std::uint64_t(pout);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<double> a(d), z(d);
    coords(pin, a.data());
    coords(pout, z.data());
    double t0 = 0, t1 = 1;
    for (int it2 = 0; it2 < 40; ++it2) {
      const double t = 0.5 * (t0 + t1);
      for (int i = 0; i < d; ++i) y[i] = a[i] + t * (z[i] - a[i]);
      (dom.contains(y.data()) ? t0 : t1) = t;
    }
    std::array<double, 3> p{0, 0, 0};
    const double t = 0.5 * (t0 + t1);
    for (int i = 0; i < d; ++i) p[i] = a[i] + t * (z[i] - a[i]);
    cache.emplace(key, p);
    return p;
  };

  BoundarySamples out;
  out.d = d;
  out.resolution = h;
  auto emit = [&](const std::array<double, 3>* q, int m) {
    // Segment (m = 2) or triangle (m = 3) with exact vertices on the boundary.
    double w = 0;
    if (m == 2) {
      double s = 0;
      for (int i = 0; i < d; ++i) s += (q[1][i] - q[0][i]) * (q[1][i] - q[0][i]);
      w = std::sqrt(s);
    } else {
      const double u[3] = {q[1][0] - q[0][0], q[1][1] - q[0][1], q[1][2] - q[0][2]};
      const double v[3] = {q[2][0] - q[0][0], q[2][1] - q[0][1], q[2][2] - q[0][2]};
      const double c0 = u[1] * v[2] - u[2] * v[1], c1 = u[2] * v[0] - u[0] * v[2], c2 = u[0] * v[1] - u[1] * v[0];
      w = 0.5 * std::sqrt(c0 * c0 + c1 * c1 + c2 * c2);
    }
    if (w <= 0) return;
    for (int i = 0; i < d; ++i) {
      double c = 0;
      for (int k = 0; k < m; ++k) c += q[k][i];
      out.x.push_back(c / m);
    }
    out.w.push_back(w);
  };

  if (d == 1) {
    for (Index c = 0; c + 1 < N; ++c)
      if (in[c] != in[c + 1]) {
        const auto p = in[c] ? crossing(c, c + 1) : crossing(c + 1, c);
        out.x.push_back(p[0]);
        out.w.push_back(1.0);
      }
    return out;
  }

  // Kuhn subdivision of every grid cube into d! simplices; the boundary inside a simplex is
  // approximated by the hull of the crossings on its mixed edges.
  std::vector<int> perm(d);
  std::vector<std::vector<int>> perms;
  std::iota(perm.begin(), perm.end(), 0);
  do perms.push_back(perm);
  while (std::next_permutation(perm.begin(), perm.end()));

  std::vector<Index> corner(1 << d);
  for (Index c = 0; c < N; ++c) {
    bool interior_cube = true;
    for (int i = 0; i < d; ++i)
      if ((c / stride[i]) % n[i] + 1 >= n[i]) interior_cube = false;
    if (!interior_cube) continue;
    int inside = 0;
    for (int m = 0; m < (1 << d); ++m) {
      Index v = c;
      for (int i = 0; i < d; ++i)
        if (m & (1 << i)) v += stride[i];
      corner[m] = v;
      inside += in[v];
    }
    if (inside == 0 || inside == (1 << d)) continue;
    for (const auto& pm : perms) {
      Index sv[4];
      int mask = 0;
      sv[0] = corner[0];
      for (int k = 0; k < d; ++k) {
        mask |= 1 << pm[k];
        sv[k + 1] = corner[mask];
      }
      Index ins[4], outs[4];
      int ni = 0, no = 0;
      for (int k = 0; k <= d; ++k) (in[sv[k]] ? ins[ni++] : outs[no++]) = sv[k];
      if (ni == 0 || no == 0) continue;
      std::array<double, 3> q[4];
      if (d == 2) {
        int m = 0;
        for (int a = 0; a < ni; ++a)
          for (int z = 0; z < no; ++z) q[m++] = crossing(ins[a], outs[z]);
        emit(q, 2);
      } else if (ni == 1 || no == 1) {
        int m = 0;
        for (int a = 0; a < ni; ++a)
          for (int z = 0; z < no; ++z) q[m++] = crossing(ins[a], outs[z]);
        emit(q, 3);
      } else {
        q[0] = crossing(ins[0], outs[0]);
        q[1] = crossing(ins[0], outs[1]);
        q[2] = crossing(ins[1], outs[1]);
        q[3] = crossing(ins[1], outs[0]);
        emit(q, 3);
        const std::array<double, 3> r[3] = {q[0], q[2], q[3]};
        emit(r, 3);
      }
    }
  }
  return out;
}

double raster_boundary_measure(const Domain& dom, double h) {
  const auto s = raster_boundary(dom, h);
  return std::accumulate(s.w.begin(), s.w.end(), 0.0);
}

double boundary_measure(const Domain& dom, double resolution) {
  if (dom.boundary_measure()) return *dom.boundary_measure();
  return raster_boundary_measure(dom, resolution);
}

RegularityReport ahlfors_from_samples(const BoundarySamples& s, double eta, double r_min, int radii,
                                      std::size_t max_centres) {
  require(s.size() > 0, Status::precondition, "no boundary samples at this resolution");
  require(eta > 0 && r_min > 0 && radii >= 1, Status::invalid_argument, "invalid radius ladder");
  const int d = s.d;
  std::vector<double> ladder;
  if (r_min >= eta || radii == 1) {
    ladder = {eta};
  } else {
    for (int k = 0; k < radii; ++k) ladder.push_back(r_min * std::pow(eta / r_min, double(k) / (radii - 1)));
  }
  const std::size_t n = s.size();
  const std::size_t stride = std::max<std::size_t>(1, (n + max_centres - 1) / max_centres);

  RegularityReport rep;
  rep.mode = RegularityReport::Mode::continuous_approximate;
  rep.eta = eta;
  rep.resolution = s.resolution;
  rep.kappa = std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, double>> dw(n);
  for (std::size_t c = 0; c < n; c += stride) {
    const double* xc = s.x.data() + c * d;
    for (std::size_t j = 0; j < n; ++j) {
      double r2 = 0;
      for (int a = 0; a < d; ++a) {
        const double t = s.x[j * d + a] - xc[a];
        r2 += t * t;
      }
      dw[j] = {r2, s.w[j]};
    }
    std::sort(dw.begin(), dw.end());
    std::size_t p = 0;
    double mass = 0;
    double worst = std::numeric_limits<double>::infinity();
    double worst_r = 0;
    for (double r : ladder) {
      while (p < n && dw[p].first < r * r) mass += dw[p++].second;
      const double ratio = mass / std::pow(r, d - 1);
      if (ratio < worst) worst = ratio, worst_r = r;
    }
    rep.per_point.push_back(worst);
    ++rep.samples;
    if (worst < rep.kappa) {
      rep.kappa = worst;
      rep.argmin_x.assign(xc, xc + d);
      rep.argmin_r = worst_r;
    }
  }
  return rep;
}

RegularityReport continuous_ahlfors_estimate(const Domain& dom, double resolution, double r_max) {
  const int d = dom.dim();
  require(d >= 2, Status::invalid_argument, "continuous Ahlfors estimate needs d >= 2");
  const auto samples = raster_boundary(dom, resolution);
  require(samples.size() > 0, Status::precondition, "no boundary samples at this resolution");
  const double bm = dom.boundary_measure() ? *dom.boundary_measure()
                                           : std::accumulate(samples.w.begin(), samples.w.end(), 0.0);
  const double eta = std::pow(bm, 1.0 / (d - 1));
  const double top = r_max > 0 ? std::min(r_max, eta) : eta;
  auto rep = ahlfors_from_samples(samples, top, std::min(top, 4.0 * resolution));
  rep.eta = eta;
  return rep;
}

// ---------------------------------------------------------------- dyadic

double DyadicCover::inner_volume() const {
  double v = 0;
  for (const auto& c : inner) v += c.box.volume();
  return v;
}

double DyadicCover::outer_volume() const { return *outer_domain->volume(); }

DyadicCover dyadic_approximations(const Domain& dom, double L) {
  const int d = dom.dim();
  const Box& bb = dom.bbox();
  require(inside_cell(bb, L), Status::precondition, "domain is not inside the fundamental cell (-L/2, L/2)^d");
  DyadicCover cov;
  cov.L = L;

  double wmax = 0;
  for (int i = 0; i < d; ++i) wmax = std::max(wmax, bb.hi[i] - bb.lo[i]);
  int top = 0;
  while (std::ldexp(1.0, top + 1) <= wmax) ++top;

  std::vector<Box> chosen;
  for (int k = top; k >= 0; --k) {
    const double a = std::ldexp(1.0, k);
    std::vector<Index> j0(d), j1(d);
    bool any = true;
    for (int i = 0; i < d; ++i) {
      j0[i] = static_cast<Index>(std::ceil((bb.lo[i] + 0.5 * a) / a));
      j1[i] = static_cast<Index>(std::floor((bb.hi[i] - 0.5 * a) / a));
      if (j0[i] > j1[i]) any = false;
    }
    if (!any) continue;
    std::vector<Index> j = j0;
    while (true) {
      Box q{std::vector<double>(d), std::vector<double>(d)};
      for (int i = 0; i < d; ++i) {
        q.lo[i] = a * double(j[i]) - 0.5 * a;
        q.hi[i] = a * double(j[i]) + 0.5 * a;
      }
      bool free = true;
      for (const auto& c : chosen)
        if (c.overlaps_interior(q)) {
          free = false;
          break;
        }
      if (free && dom.contains_box(q)) {
        chosen.push_back(q);
        cov.inner.push_back({k, j, q});
        cov.levels[k].push_back(j);
      }
      int i = d - 1;
      while (i >= 0 && ++j[i] > j1[i]) j[i] = j0[i], --i;
      if (i < 0) break;
    }
  }

  std::vector<DomainPtr> inner_parts, outer_parts;
  for (const auto& c : cov.inner) {
    inner_parts.push_back(Domain::box(c.box));
    outer_parts.push_back(inner_parts.back());
  }

  Box cell{std::vector<double>(d, -0.5 * L), std::vector<double>(d, 0.5 * L)};
  std::vector<Index> v0(d), v1(d);
  for (int i = 0; i < d; ++i) {
    v0[i] = static_cast<Index>(std::floor(bb.lo[i] - 0.5)) + 1;
    v1[i] = static_cast<Index>(std::ceil(bb.hi[i] + 0.5)) - 1;
  }
  std::vector<Index> v = v0;
  while (true) {
    Box r{std::vector<double>(d), std::vector<double>(d)};
    for (int i = 0; i < d; ++i) {
      r.lo[i] = double(v[i]) - 0.5;
      r.hi[i] = double(v[i]) + 0.5;
    }
    std::vector<Box> near;
    for (const auto& c : chosen)
      if (c.overlaps_interior(r)) near.push_back(c);
    auto pieces = subtract(r, near);
    bool hit = false;
    for (const auto& p : pieces)
      if (dom.meets_box_interior(p)) {
        hit = true;
        break;
      }
    if (hit) {
      cov.v.push_back(v);
      if (auto clipped = intersect(r, cell)) cov.patches.push_back(*clipped);
      for (const auto& p : pieces)
        if (auto q = intersect(p, cell)) outer_parts.push_back(Domain::box(*q));
    }
    int i = d - 1;
    while (i >= 0 && ++v[i] > v1[i]) v[i] = v0[i], --i;
    if (i < 0) break;
  }
  cov.inner_domain = Domain::unite(std::move(inner_parts), d);
  cov.outer_domain = Domain::unite(std::move(outer_parts), d);
  return cov;
}

LatticeCount lattice_count_check(const Domain& dom, double L, double kappa) {
  require(dom.volume() && dom.boundary_measure(), Status::precondition, "lattice count check needs exact geometry");
  require(kappa > 0, Status::invalid_argument, "regularity constant must be positive");
  const auto g = discretize(dom, L);
  LatticeCount r;
  r.points = g.size();
  r.lhs = double(g.size()) / std::pow(L, dom.dim());
  r.volume = *dom.volume();
  r.correction = *dom.boundary_measure() / (kappa * L);
  return r;
}

}  // namespace plunge
