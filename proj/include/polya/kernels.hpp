#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "polya/grid.hpp"

namespace polya {

/// Wrapped Gaussian sum_k exp(-(z - shift + 2k pi)^2 t) on the circle.
struct HeatKernel {
  double t = 1.0;
  double shift = 0.0;
};

/// |z|^{-(1+sigma)}, periodized in z on periodic grids.
struct RieszKernel {
  double sigma = 0.5;
};

/// exp(-z^2 t) on the line.
struct GaussianKernel {
  double t = 1.0;
};

using KernelSpec = std::variant<HeatKernel, RieszKernel, GaussianKernel>;

/// The kernel's own rearrangement: drops translations, every other family is
/// already symmetric decreasing.
KernelSpec symmetrized(const KernelSpec& spec);

/// Cell-pair integrals W[d] = int_{cell i} int_{cell i+d} g(x - y) dx dy.
///
/// Periodized tables hold N entries indexed by d mod N. Line tables hold the
/// 2N-1 offsets -(N-1)..N-1 together with the exterior mass of each cell, i.e.
/// int_{cell i} int_{R \ box} g(x - y) dy dx. For singular kernels W[0] := 0.
class KernelWeights {
 public:
  KernelWeights(Grid1D grid, bool periodized, bool singular, std::vector<double> table,
                std::vector<double> exterior, double accuracy);

  const Grid1D& grid() const noexcept { return grid_; }
  bool periodized() const noexcept { return periodized_; }
  bool singular() const noexcept { return singular_; }
  double accuracy() const noexcept { return accuracy_; }
  std::span<const double> table() const noexcept { return table_; }
  std::span<const double> exterior() const noexcept { return exterior_; }

  double operator()(std::ptrdiff_t d) const;

  /// sum_j W[i - j] over the cells j of the grid.
  double row_sum(std::size_t i) const;

 private:
  Grid1D grid_;
  bool periodized_;
  bool singular_;
  std::vector<double> table_;
  std::vector<double> exterior_;
  double accuracy_;
};

KernelWeights riesz_weights_1d(const Grid1D& grid, double sigma, bool periodized);

/// Non-periodized Riesz cell-pair weight at lattice offset m >= 1 for cells of
/// width h and kernel exponent 1 + sigma.
double riesz_line_weight(std::size_t m, double h, double sigma);

struct HeatKernelParams {
  double t = 1.0;
  double tail_tolerance = 1e-16;
};

/// t below which the Fourier (theta) side of the heat kernel is used.
inline constexpr double kHeatSwitchTime = 1.0 / (4.0 * std::numbers::pi * std::numbers::pi);

double heat_kernel_periodic(double z, const HeatKernelParams& params);
double heat_kernel_direct(double z, double t, double tail_tolerance = 1e-16);
double heat_kernel_theta(double z, double t, double tail_tolerance = 1e-16);

/// Sign test of d/dz g(z, t) on `samples` interior points of (0, pi), evaluated
/// with the growing factor scaled out so no term underflows.
bool heat_kernel_decreasing(double t, std::size_t samples = 512);

KernelWeights heat_weights_periodic(const Grid1D& grid, double t);
KernelWeights heat_weights_periodic(const Grid1D& grid, const HeatKernel& kernel);
KernelWeights gaussian_weights_interval(const Grid1D& grid, double t);

/// Weight table of `spec` on `grid`; Riesz weights are periodized on periodic grids.
KernelWeights weights_for(const KernelSpec& spec, const Grid1D& grid);

/// Strict decrease of W over circle offsets 0..N/2 (1..N/2 for singular
/// tables) together with evenness.
bool check_kernel_monotone(const KernelWeights& weights);

/// Cell-pair weights of the n = 2 Riesz kernel |z|^{-(2+sigma)}, periodized in x1.
/// table index: d1 mod N1 (rows) by d2 + N2 - 1 (columns).
class RieszWeights2D {
 public:
  RieszWeights2D(Grid1D axis1, Grid1D axis2, double sigma, std::vector<double> table, std::vector<double> exterior,
                 double accuracy);

  const Grid1D& axis1() const noexcept { return axis1_; }
  const Grid1D& axis2() const noexcept { return axis2_; }
  double sigma() const noexcept { return sigma_; }
  double accuracy() const noexcept { return accuracy_; }

  double operator()(std::ptrdiff_t d1, std::ptrdiff_t d2) const;

  /// Kernel mass outside the x2-box seen from a cell in x2-row i2 (y1 over R).
  double exterior(std::size_t i2) const { return exterior_.at(i2); }

 private:
  Grid1D axis1_;
  Grid1D axis2_;
  double sigma_;
  std::vector<double> table_;
  std::vector<double> exterior_;
  double accuracy_;
};

/// Cell-pair weights of |z|^{-(n+sigma)} on the axes of a GridFunctionND
/// (axis 0 periodic). Supported for n = 2.
RieszWeights2D riesz_weights_nd(std::span<const Grid1D> axes, double sigma, double tolerance = 1e-12);

/// Non-periodized 2D Riesz weight at lattice offset (m, d2) for cells h1 x h2.
double riesz_line_weight_2d(long m, long d2, double h1, double h2, double sigma, double tolerance = 1e-12,
                            double* error_estimate = nullptr);

/// Trapezoidal rule in s = log t for int_0^inf t^{lambda-1} F(t) dt.
struct LaplaceConfig {
  double lambda = 1.0;
  double z_min = 1e-2;
  double z_max = 1e2;
  double tolerance = 1e-10;
  std::size_t max_nodes = 50000;
};

struct LaplaceRule {
  double lambda = 1.0;
  double step = 0.0;
  double s_lo = 0.0;
  std::size_t count = 0;
  double z_min = 0.0;
  double z_max = 0.0;

  double node(std::size_t k) const;
  /// sum_k step * t_k^lambda * exp(-z t_k), which approximates Gamma(lambda) z^{-lambda}.
  double apply(double z) const;
};

LaplaceRule laplace_quadrature(const LaplaceConfig& cfg);

}  // namespace polya
