#pragma once

#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "polya/errors.hpp"

namespace polya {

/// Uniform 1D grid, either one period [-pi, pi) of a 2pi-periodic axis or a
/// bounded interval [lo, hi].
class Grid1D {
 public:
  static Grid1D periodic(std::size_t n_cells);
  static Grid1D interval(std::size_t n_cells, double lo, double hi);

  std::size_t size() const noexcept { return n_; }
  bool is_periodic() const noexcept { return periodic_; }
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double length() const noexcept { return hi_ - lo_; }
  double width() const noexcept { return (hi_ - lo_) / static_cast<double>(n_); }
  double center() const noexcept { return 0.5 * (lo_ + hi_); }

  double cell_lo(std::size_t i) const noexcept { return lo_ + static_cast<double>(i) * width(); }
  double cell_center(std::size_t i) const noexcept { return lo_ + (static_cast<double>(i) + 0.5) * width(); }

  /// Index of the cell containing x. Periodic grids reduce x modulo 2pi first.
  std::size_t cell_of(double x) const;

  Grid1D refined(std::size_t factor) const;

  bool operator==(const Grid1D&) const = default;

 private:
  Grid1D(std::size_t n, bool periodic, double lo, double hi) : n_(n), periodic_(periodic), lo_(lo), hi_(hi) {}

  std::size_t n_;
  bool periodic_;
  double lo_;
  double hi_;
};

/// Nonnegative piecewise-constant function on a Grid1D.
class StepFunction {
 public:
  StepFunction(Grid1D grid, std::vector<double> values);

  /// Applies |.| to signed data before construction.
  static StepFunction from_signed(Grid1D grid, std::vector<double> values);
  static StepFunction constant(Grid1D grid, double c);

  const Grid1D& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

  double mass() const;
  double max() const;
  double min() const;
  bool is_constant() const;

  bool operator==(const StepFunction&) const = default;

 private:
  Grid1D grid_;
  std::vector<double> values_;
};

StepFunction refine(const StepFunction& u, std::size_t factor);

/// |{u > tau}|, strict inequality.
double superlevel_measure(const StepFunction& u, double tau);

/// Exact comparison of distribution functions. Grids may differ in cell count
/// but must cover domains of equal length.
bool equimeasurable(const StepFunction& u, const StepFunction& v);

double layer_cake_value(const StepFunction& u, double x);

/// Row-major tensor of cell values over a product of 1D grids.
class TensorGrid {
 public:
  explicit TensorGrid(std::vector<Grid1D> axes);

  const std::vector<Grid1D>& axes() const noexcept { return axes_; }
  const Grid1D& axis(std::size_t k) const { return axes_.at(k); }
  std::size_t rank() const noexcept { return axes_.size(); }
  std::size_t size() const noexcept { return size_; }
  std::size_t stride(std::size_t k) const { return strides_.at(k); }
  double cell_volume() const;

  std::size_t flat(std::span<const std::size_t> index) const;
  std::vector<std::size_t> unflat(std::size_t flat_index) const;

  bool operator==(const TensorGrid&) const = default;

 private:
  std::vector<Grid1D> axes_;
  std::vector<std::size_t> strides_;
  std::size_t size_;
};

/// Function on (periodic x1) x (interval x'). Axis 0 is the periodic one.
class GridFunctionND {
 public:
  GridFunctionND(std::vector<Grid1D> axes, std::vector<double> values);

  const TensorGrid& shape() const noexcept { return shape_; }
  const Grid1D& axis1() const { return shape_.axis(0); }
  std::size_t dimension() const noexcept { return shape_.rank(); }
  std::span<const double> values() const noexcept { return values_; }
  double at(std::span<const std::size_t> index) const { return values_[shape_.flat(index)]; }

  /// Values vanish on the outer cell layer of every perpendicular axis.
  bool has_compact_support() const;

  /// x1-slice at a fixed perpendicular multi-index (flattened over axes 1..n-1).
  StepFunction x1_slice(std::size_t perp_flat) const;
  std::size_t perp_size() const noexcept { return values_.size() / axis1().size(); }

  bool operator==(const GridFunctionND&) const = default;

 private:
  TensorGrid shape_;
  std::vector<double> values_;
};

/// Function on a product of bounded intervals (the x' box).
class BoxFunction {
 public:
  BoxFunction(std::vector<Grid1D> axes, std::vector<double> values);

  const TensorGrid& shape() const noexcept { return shape_; }
  std::size_t dimension() const noexcept { return shape_.rank(); }
  std::span<const double> values() const noexcept { return values_; }

  bool operator==(const BoxFunction&) const = default;

 private:
  TensorGrid shape_;
  std::vector<double> values_;
};

/// Equimeasurability of two uniform cell tables covering domains of equal
/// measure: each value must occupy the same fraction of its domain.
bool equimeasurable_cells(std::span<const double> a, std::span<const double> b);

}  // namespace polya
