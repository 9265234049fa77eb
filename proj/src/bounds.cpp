#include "bounds.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "common.hpp"

namespace plunge {

Variant parse_variant(const std::string& s) {
  std::string t;
  for (char c : s) t += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (t == "th1") return Variant::th1;
  if (t == "th2") return Variant::th2;
  if (t == "th3") return Variant::th3;
  if (t == "th-cube" || t == "thcube" || t == "cube") return Variant::th_cube;
  fail(Status::invalid_argument, "unknown bound variant '" + s + "'");
}

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::th1: return "th1";
    case Variant::th2: return "th2";
    case Variant::th3: return "th3";
    case Variant::th_cube: return "th-cube";
  }
  return "?";
}

BoundValue theorem_rhs_checked(const BoundInputs& in) {
  BoundValue b;
  b.eps_ok = in.eps > 0 && in.eps < 0.5;
  b.alpha_ok = in.alpha > 0 && in.alpha < 0.5;
  const bool cube = in.variant == Variant::th_cube;
  b.product_ok = cube ? in.bE >= 1 : in.bE * in.bF >= 1;
  if (!b.ok() || in.d < 1 || in.kE <= 0 || in.A <= 0 || (!cube && in.kF <= 0) || (cube && in.eta <= 0)) {
    b.value = std::numeric_limits<double>::quiet_NaN();
    return b;
  }
  const double d = in.d;
  if (cube) {
    const double scale = std::pow(std::max(in.W_max, 1.0 / in.eta), d - 1);
    b.value = in.A * scale * (in.bE / in.kE) * std::pow(std::log(scale * in.bE / (in.kE * in.eps)), 2 * d * (1 + in.alpha));
  } else {
    const double power = 2 * d * (1 + in.alpha) + (in.extra_log ? 1.0 : 0.0);
    b.value = in.A * (in.bE / in.kE) * (in.bF / in.kF) * std::pow(std::log(in.bE * in.bF / (in.kE * in.eps)), power);
  }
  return b;
}

BoundValue theorem_rhs(const BoundInputs& in) {
  const auto b = theorem_rhs_checked(in);
  require(b.eps_ok, Status::precondition, "eps must lie in (0, 1/2)");
  require(b.alpha_ok, Status::precondition, "alpha must lie in (0, 1/2)");
  require(b.product_ok, Status::precondition,
          in.variant == Variant::th_cube ? "th-cube needs |dE| >= 1" : "boundary product must be at least 1");
  require(std::isfinite(b.value), Status::invalid_argument, "bound inputs must be positive");
  return b;
}

double landau_widom(double ab, double eps, double c) {
  require(ab > 1, Status::invalid_argument, "ab must exceed 1");
  require(eps > 0 && eps <= 0.5, Status::invalid_argument, "eps must lie in (0, 1/2]");
  return c * std::log(ab) * std::log((1 - eps) / eps);
}

Fit fit_scaling(const std::vector<double>& x, const std::vector<double>& y, Model m) {
  require(x.size() == y.size(), Status::invalid_argument, "fit inputs differ in length");
  require(x.size() >= 4, Status::precondition, "fit needs at least 4 records");
  for (double v : x) require(v > 0, Status::precondition, "fit regressors must be positive");
  Fit f;
  if (m == Model::ratio) {
    double r = 0;
    for (std::size_t i = 0; i < x.size(); ++i) r = std::max(r, y[i] / x[i]);
    f.coef = {r};
    f.r2 = 1;
    for (std::size_t i = 0; i < x.size(); ++i) f.residuals.push_back(y[i] - r * x[i]);
    return f;
  }
  std::vector<double> u(x.size()), v(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    u[i] = std::log(x[i]);
    if (m == Model::power_law) {
      require(y[i] > 0, Status::precondition, "power-law fit needs positive responses");
      v[i] = std::log(y[i]);
    } else {
      v[i] = y[i];
    }
  }
  const double n = double(u.size());
  double su = 0, sv = 0;
  for (std::size_t i = 0; i < u.size(); ++i) su += u[i], sv += v[i];
  const double mu = su / n, mv = sv / n;
  double suu = 0, suv = 0, svv = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    suu += (u[i] - mu) * (u[i] - mu);
    suv += (u[i] - mu) * (v[i] - mv);
    svv += (v[i] - mv) * (v[i] - mv);
  }
  require(suu > 1e-300, Status::precondition, "degenerate design: all regressors equal");
  const double slope = suv / suu, icpt = mv - slope * mu;
  f.coef = {icpt, slope};
  double ss = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double r = v[i] - (icpt + slope * u[i]);
    f.residuals.push_back(r);
    ss += r * r;
  }
  f.r2 = svv > 0 ? 1.0 - ss / svv : 1.0;
  return f;
}

}  // namespace plunge
