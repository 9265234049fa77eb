#pragma once

#include <string>
#include <vector>

namespace plunge {

enum class Variant { th1, th2, th3, th_cube };

Variant parse_variant(const std::string& s);
std::string variant_name(Variant v);

struct BoundInputs {
  Variant variant = Variant::th2;
  int d = 2;
  double bE = 0;      // |dE|, or #dOmega for th3
  double kE = 1;      // kappa of dE, or of dOmega for th3
  double bF = 0;      // |dF| (unused by th-cube)
  double kF = 1;
  double eta = 1;     // scale of dE (th-cube)
  double W_max = 1;   // largest side of the box F (th-cube)
  double eps = 0.1;
  double alpha = 0.25;
  double A = 1;
  bool extra_log = true;  // exponent 2d(1+alpha)+1 for th1..th3; false drops the +1
};

struct BoundValue {
  double value = 0;
  bool product_ok = true;  // |dE||dF| >= 1 or #dOmega |dF| >= 1
  bool eps_ok = true;
  bool alpha_ok = true;
  bool ok() const { return product_ok && eps_ok && alpha_ok; }
};

// Evaluates the right-hand side; throws when a hypothesis is violated.
BoundValue theorem_rhs(const BoundInputs& in);
// Same, without throwing; value is NaN when a hypothesis fails.
BoundValue theorem_rhs_checked(const BoundInputs& in);

double landau_widom(double ab, double eps, double c);

enum class Model { power_law, log_linear, ratio };

struct Fit {
  std::vector<double> coef;  // power_law: {log C, exponent}; log_linear: {intercept, slope}; ratio: {max ratio}
  double r2 = 0;
  std::vector<double> residuals;
};

// power_law: log y = c0 + c1 log x; log_linear: y = c0 + c1 log x; ratio: c0 = max y / x.
Fit fit_scaling(const std::vector<double>& x, const std::vector<double>& y, Model m);

}  // namespace plunge
