#pragma once

#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "common.hpp"

namespace plunge {

struct Box {
  std::vector<double> lo, hi;
  int dim() const { return static_cast<int>(lo.size()); }
  double volume() const;
  bool overlaps_interior(const Box& o) const;
};

// Pieces of a \ b as pairwise interior-disjoint boxes.
std::vector<Box> subtract(const Box& a, const Box& b);
std::vector<Box> subtract(const Box& a, const std::vector<Box>& bs);

enum class Kind { box, ball, annulus, box_minus_ball, l_shape, finite_union, dilation, shift, predicate };

class Domain;
using DomainPtr = std::shared_ptr<const Domain>;

// Compact subset of R^d. Catalog kinds are closed and carry exact geometry.
class Domain {
 public:
  using Predicate = std::function<bool(const double*)>;

  static DomainPtr box(std::vector<double> widths);
  static DomainPtr box(Box b);
  static DomainPtr ball(int d, double r);
  static DomainPtr annulus(int d, double r0, double r1);
  static DomainPtr box_minus_ball(int d, double w, double r);
  static DomainPtr l_shape(double w, double notch);
  static DomainPtr unite(std::vector<DomainPtr> parts, int d = 0);
  static DomainPtr dilate(DomainPtr base, double t);
  static DomainPtr shift(DomainPtr base, std::vector<double> v);
  static DomainPtr predicate(int d, Predicate p, Box bbox, std::string name = "predicate");

  int dim() const { return d_; }
  Kind kind() const { return kind_; }
  const Box& bbox() const { return bbox_; }
  const std::vector<DomainPtr>& children() const { return kids_; }
  const std::vector<double>& params() const { return par_; }

  bool contains(const double* x) const;
  bool contains(const std::vector<double>& x) const { return contains(x.data()); }

  std::optional<double> volume() const { return vol_; }
  std::optional<double> boundary_measure() const { return bm_; }
  bool has_exact_transform() const { return exact_ft_; }

  // Integral of exp(-2 pi i x.xi) over the domain; closed form only.
  std::complex<double> transform(const double* xi) const;

  // Closed box relations; exact for catalog kinds, sampled for predicates.
  bool contains_box(const Box& b) const;
  bool meets_box_interior(const Box& b) const;

  std::string describe() const;

 private:
  Domain() = default;
  void finish();

  int d_ = 0;
  Kind kind_ = Kind::predicate;
  std::vector<double> par_;
  std::vector<DomainPtr> kids_;
  Predicate pred_;
  std::string name_;
  Box bbox_;
  std::optional<double> vol_, bm_;
  bool exact_ft_ = false;
};

double sphere_area(int d, double r);
double ball_volume(int d, double r);

// Finite subset of L^{-1} Z^d stored as integer vectors, sorted lexicographically.
class GridSet {
 public:
  GridSet() = default;
  GridSet(int d, double L, std::vector<Index> flat);

  int dim() const { return d_; }
  double resolution() const { return L_; }
  std::size_t size() const { return n_; }
  bool empty() const { return n_ == 0; }
  const Index* point(std::size_t i) const { return pts_.data() + i * d_; }
  const std::vector<Index>& flat() const { return pts_; }
  bool contains(const Index* k) const;
  std::vector<Index> lower() const;
  std::vector<Index> upper() const;
  GridSet translated(const std::vector<Index>& v) const;

 private:
  int d_ = 0;
  double L_ = 1.0;
  std::size_t n_ = 0;
  std::vector<Index> pts_;
};

GridSet discretize(const Domain& dom, double L);
GridSet discrete_boundary(const GridSet& s);

struct RegularityReport {
  enum class Mode { discrete_exact, continuous_approximate };
  Mode mode = Mode::discrete_exact;
  double eta = 0;
  double kappa = 0;
  double resolution = 0;
  // Discrete mode: minimiser (k, n) and the worst ratio per boundary point.
  std::vector<Index> argmin_point;
  Index argmin_n = 0;
  std::vector<double> per_point;
  // Continuous mode: worst sample location and radius.
  std::vector<double> argmin_x;
  double argmin_r = 0;
  std::size_t samples = 0;
};

RegularityReport discrete_ahlfors(const GridSet& boundary);

struct BoundarySamples {
  int d = 0;
  std::vector<double> x;  // flat, d per sample
  std::vector<double> w;  // surface measure carried by each sample
  double resolution = 0;
  std::size_t size() const { return w.size(); }
};

// Boundary pieces from marching simplices on the resolution grid; vertices located by bisection.
BoundarySamples raster_boundary(const Domain& dom, double h);
double raster_boundary_measure(const Domain& dom, double h);
double boundary_measure(const Domain& dom, double resolution);

RegularityReport ahlfors_from_samples(const BoundarySamples& s, double eta, double r_min, int radii = 16,
                                      std::size_t max_centres = 1500);
RegularityReport continuous_ahlfors_estimate(const Domain& dom, double resolution, double r_max = 0);

struct DyadicCube {
  int level = 0;
  std::vector<Index> j;
  Box box;
};

struct DyadicCover {
  double L = 0;
  std::vector<DyadicCube> inner;
  std::map<int, std::vector<std::vector<Index>>> levels;  // J_k
  std::vector<std::vector<Index>> v;                      // V
  std::vector<Box> patches;                               // R_v
  DomainPtr inner_domain;                                 // F-
  DomainPtr outer_domain;                                 // F+ as disjoint boxes
  double inner_volume() const;
  double outer_volume() const;
};

DyadicCover dyadic_approximations(const Domain& dom, double L);

struct LatticeCount {
  double lhs = 0;
  double volume = 0;
  double correction = 0;
  std::size_t points = 0;
};

LatticeCount lattice_count_check(const Domain& dom, double L, double kappa);

bool inside_cell(const Box& b, double L);

}  // namespace plunge
