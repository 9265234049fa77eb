#pragma once

#include <complex>
#include <string>
#include <vector>

#include "geometry.hpp"

namespace plunge {

// Indicator transform with an optional rasterized fallback for domains without a closed form.
class IndicatorTransform {
 public:
  // cell <= 0 requests exact mode.
  IndicatorTransform(DomainPtr F, double cell = 0);
  std::complex<double> operator()(const double* xi) const;
  bool exact() const { return cell_ <= 0; }
  double cell() const { return cell_; }

 private:
  DomainPtr F_;
  double cell_;
  std::vector<double> centres_;  // flat cell centres inside F
};

std::complex<double> ft_indicator(const Domain& F, const double* xi);

struct AssembleOptions {
  std::size_t cap = 6000;
  bool allow_raster = false;  // rasterize domains without a closed-form transform
  double raster_cell = 0;     // 0: min(0.01, 1/(8 max|xi|))
};

struct ConcentrationMatrix {
  GridSet omega;
  DomainPtr F;
  std::size_t n = 0;
  std::vector<std::complex<double>> a;  // column-major n x n
  bool exact = true;
  double cell = 0;  // raster cell size when not exact
  bool real = true; // imaginary parts negligible
  std::complex<double> operator()(std::size_t i, std::size_t j) const { return a[i + j * n]; }
};

// Transform of F sampled on all differences of points in omega.
class DifferenceTable {
 public:
  DifferenceTable(const GridSet& omega, const IndicatorTransform& ft);
  const std::complex<double>& at(const Index* k, const Index* kp) const;

 private:
  int d_;
  std::vector<Index> span_, stride_;
  std::vector<std::complex<double>> v_;
};

void check_in_cell(const Domain& F, double L);

ConcentrationMatrix assemble(const GridSet& omega, const DomainPtr& F, const AssembleOptions& opt = {});

struct TraceStats {
  double trace = 0;
  double trace_sq = 0;
};
TraceStats trace_stats(const ConcentrationMatrix& m);
TraceStats trace_stats(const std::vector<std::complex<double>>& a, std::size_t n);

// Real symmetric blocks of the matrix under coordinate reflections, used when omega and F
// are both symmetric under every sign flip. Block eigenvalues together give the full spectrum.
struct ParityBlocks {
  std::vector<std::vector<double>> blocks;  // column-major
  std::vector<std::size_t> sizes;
  std::size_t total = 0;
};
bool reflection_symmetric(const GridSet& omega, const Domain& F);
ParityBlocks assemble_parity_blocks(const GridSet& omega, const DomainPtr& F, const AssembleOptions& opt = {});

// Quadrature discretization of the kernel; eigenvalues sorted descending, padded to #omega.
std::vector<double> nystrom_oracle(const GridSet& omega, const Domain& F, int grid_n);

std::string matrix_csv(const ConcentrationMatrix& m);

}  // namespace plunge
