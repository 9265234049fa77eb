#include "linalg.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <functional>

#include "common.hpp"

namespace plunge {

std::vector<double> sym_eigenvalues(std::vector<double> a, std::size_t n) {
  require(a.size() == n * n, Status::internal, "matrix storage does not match its size");
  std::vector<double> w(n);
  if (n == 0) return w;
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'L', static_cast<lapack_int>(n), a.data(),
                                         static_cast<lapack_int>(n), w.data());
  require(info == 0, Status::numerical, "dsyevd failed with info " + std::to_string(info));
  std::sort(w.begin(), w.end(), std::greater<>());
  return w;
}

std::vector<double> herm_eigenvalues(std::vector<std::complex<double>> a, std::size_t n) {
  require(a.size() == n * n, Status::internal, "matrix storage does not match its size");
  std::vector<double> w(n);
  if (n == 0) return w;
  const lapack_int info =
      LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'L', static_cast<lapack_int>(n),
                     reinterpret_cast<lapack_complex_double*>(a.data()), static_cast<lapack_int>(n), w.data());
  require(info == 0, Status::numerical, "zheevd failed with info " + std::to_string(info));
  std::sort(w.begin(), w.end(), std::greater<>());
  return w;
}

void gauss_legendre(int n, double a, double b, std::vector<double>& x, std::vector<double>& w) {
  require(n >= 1, Status::invalid_argument, "quadrature order must be positive");
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0, p1 = z;
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      if (n == 1) dp = 1.0;
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    const double wi = 2.0 / ((1.0 - z * z) * dp * dp);
    const double m = 0.5 * (a + b), h = 0.5 * (b - a);
    x[i] = m - h * z;
    x[n - 1 - i] = m + h * z;
    w[i] = w[n - 1 - i] = h * wi;
  }
}

}  // namespace plunge
