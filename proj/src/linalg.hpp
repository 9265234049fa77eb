#pragma once

#include <complex>
#include <vector>

namespace plunge {

// Eigenvalues of a dense symmetric / Hermitian n x n matrix (column-major), sorted descending.
// The input is consumed.
std::vector<double> sym_eigenvalues(std::vector<double> a, std::size_t n);
std::vector<double> herm_eigenvalues(std::vector<std::complex<double>> a, std::size_t n);

// Gauss-Legendre nodes and weights on [a, b].
void gauss_legendre(int n, double a, double b, std::vector<double>& x, std::vector<double>& w);

}  // namespace plunge
