#include "polya/grid.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace polya {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::InvalidParameter: return "InvalidParameter";
    case Errc::IncompatibleGrids: return "IncompatibleGrids";
    case Errc::GridMismatch: return "GridMismatch";
    case Errc::OutOfDomain: return "OutOfDomain";
    case Errc::NegativeValue: return "NegativeValue";
    case Errc::NotPeriodic: return "NotPeriodic";
    case Errc::NotIndicator: return "NotIndicator";
    case Errc::SigmaOutOfRange: return "SigmaOutOfRange";
    case Errc::StepFunctionDivergence: return "StepFunctionDivergence";
    case Errc::ToleranceNotMet: return "ToleranceNotMet";
    case Errc::NonpositiveTime: return "NonpositiveTime";
    case Errc::RangeTooWide: return "RangeTooWide";
    case Errc::UnknownName: return "UnknownName";
    case Errc::NotNormalized: return "NotNormalized";
    case Errc::NotAttained: return "NotAttained";
    case Errc::DivergentTail: return "DivergentTail";
    case Errc::KernelNotMonotone: return "KernelNotMonotone";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

Grid1D Grid1D::periodic(std::size_t n_cells) {
  if (n_cells == 0) throw Error(Errc::InvalidParameter, "grid needs at least one cell");
  return Grid1D(n_cells, true, -std::numbers::pi, std::numbers::pi);
}

Grid1D Grid1D::interval(std::size_t n_cells, double lo, double hi) {
  if (n_cells == 0) throw Error(Errc::InvalidParameter, "grid needs at least one cell");
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
    throw Error(Errc::InvalidParameter, "interval endpoints must be finite with lo < hi");
  return Grid1D(n_cells, false, lo, hi);
}

std::size_t Grid1D::cell_of(double x) const {
  if (!std::isfinite(x)) throw Error(Errc::OutOfDomain, "non-finite point");
  if (periodic_) {
    const double period = hi_ - lo_;
    x = lo_ + std::fmod(std::fmod(x - lo_, period) + period, period);
  } else if (x < lo_ || x > hi_) {
    throw Error(Errc::OutOfDomain, "point outside [lo, hi]");
  }
  const auto i = static_cast<std::size_t>(std::floor((x - lo_) / width()));
  return std::min(i, n_ - 1);
}

Grid1D Grid1D::refined(std::size_t factor) const {
  if (factor == 0) throw Error(Errc::InvalidParameter, "refinement factor must be >= 1");
  return Grid1D(n_ * factor, periodic_, lo_, hi_);
}

StepFunction::StepFunction(Grid1D grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw Error(Errc::GridMismatch, "value count " + std::to_string(values_.size()) + " != cell count " +
                                        std::to_string(grid_.size()));
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(Errc::InvalidParameter, "non-finite value");
    if (v < 0.0) throw Error(Errc::NegativeValue, "step functions are nonnegative; use from_signed");
  }
}

StepFunction StepFunction::from_signed(Grid1D grid, std::vector<double> values) {
  for (double& v : values) v = std::abs(v);
  return StepFunction(grid, std::move(values));
}

StepFunction StepFunction::constant(Grid1D grid, double c) {
  return StepFunction(grid, std::vector<double>(grid.size(), c));
}

double StepFunction::mass() const {
  return grid_.width() * std::accumulate(values_.begin(), values_.end(), 0.0);
}

double StepFunction::max() const { return *std::max_element(values_.begin(), values_.end()); }
double StepFunction::min() const { return *std::min_element(values_.begin(), values_.end()); }

bool StepFunction::is_constant() const {
  return std::all_of(values_.begin(), values_.end(), [&](double v) { return v == values_.front(); });
}

StepFunction refine(const StepFunction& u, std::size_t factor) {
  const Grid1D fine = u.grid().refined(factor);
  std::vector<double> out;
  out.reserve(fine.size());
  for (double v : u.values()) out.insert(out.end(), factor, v);
  return StepFunction(fine, std::move(out));
}

double superlevel_measure(const StepFunction& u, double tau) {
  const auto count = std::count_if(u.values().begin(), u.values().end(), [&](double v) { return v > tau; });
  return u.grid().length() * static_cast<double>(count) / static_cast<double>(u.size());
}

bool equimeasurable_cells(std::span<const double> a, std::span<const double> b) {
  std::map<double, std::size_t> ca;
  std::map<double, std::size_t> cb;
  for (double v : a) ++ca[v];
  for (double v : b) ++cb[v];
  if (ca.size() != cb.size()) return false;
  for (auto ia = ca.begin(), ib = cb.begin(); ia != ca.end(); ++ia, ++ib) {
    if (ia->first != ib->first) return false;
    if (ia->second * b.size() != ib->second * a.size()) return false;
  }
  return true;
}

bool equimeasurable(const StepFunction& u, const StepFunction& v) {
  const double la = u.grid().length();
  const double lb = v.grid().length();
  if (std::abs(la - lb) > 1e-12 * std::max(la, lb))
    throw Error(Errc::IncompatibleGrids, "domains have different lengths");
  return equimeasurable_cells(u.values(), v.values());
}

double layer_cake_value(const StepFunction& u, double x) { return u[u.grid().cell_of(x)]; }

TensorGrid::TensorGrid(std::vector<Grid1D> axes) : axes_(std::move(axes)), strides_(axes_.size()), size_(1) {
  if (axes_.empty()) throw Error(Errc::InvalidParameter, "tensor grid needs at least one axis");
  for (std::size_t k = axes_.size(); k-- > 0;) {
    strides_[k] = size_;
    size_ *= axes_[k].size();
  }
}

double TensorGrid::cell_volume() const {
  double vol = 1.0;
  for (const auto& a : axes_) vol *= a.width();
  return vol;
}

std::size_t TensorGrid::flat(std::span<const std::size_t> index) const {
  if (index.size() != axes_.size()) throw Error(Errc::InvalidParameter, "index rank mismatch");
  std::size_t f = 0;
  for (std::size_t k = 0; k < index.size(); ++k) {
    if (index[k] >= axes_[k].size()) throw Error(Errc::OutOfDomain, "index out of range");
    f += index[k] * strides_[k];
  }
  return f;
}

std::vector<std::size_t> TensorGrid::unflat(std::size_t flat_index) const {
  std::vector<std::size_t> idx(axes_.size());
  for (std::size_t k = 0; k < axes_.size(); ++k) {
    idx[k] = flat_index / strides_[k];
    flat_index %= strides_[k];
  }
  return idx;
}

namespace {

void check_values(const TensorGrid& shape, std::span<const double> values) {
  if (values.size() != shape.size())
    throw Error(Errc::GridMismatch, "value count " + std::to_string(values.size()) + " != cell count " +
                                        std::to_string(shape.size()));
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(Errc::InvalidParameter, "non-finite value");
    if (v < 0.0) throw Error(Errc::NegativeValue, "grid functions are nonnegative");
  }
}

}  // namespace

GridFunctionND::GridFunctionND(std::vector<Grid1D> axes, std::vector<double> values)
    : shape_(std::move(axes)), values_(std::move(values)) {
  if (!shape_.axis(0).is_periodic()) throw Error(Errc::NotPeriodic, "axis x1 must be periodic");
  for (std::size_t k = 1; k < shape_.rank(); ++k)
    if (shape_.axis(k).is_periodic()) throw Error(Errc::InvalidParameter, "perpendicular axes must be intervals");
  check_values(shape_, values_);
}

bool GridFunctionND::has_compact_support() const {
  for (std::size_t f = 0; f < values_.size(); ++f) {
    if (values_[f] == 0.0) continue;
    const auto idx = shape_.unflat(f);
    for (std::size_t k = 1; k < idx.size(); ++k)
      if (idx[k] == 0 || idx[k] + 1 == shape_.axis(k).size()) return false;
  }
  return true;
}

StepFunction GridFunctionND::x1_slice(std::size_t perp_flat) const {
  const std::size_t n1 = axis1().size();
  const std::size_t stride = shape_.stride(0);
  if (perp_flat >= stride) throw Error(Errc::OutOfDomain, "slice index out of range");
  std::vector<double> out(n1);
  for (std::size_t i = 0; i < n1; ++i) out[i] = values_[i * stride + perp_flat];
  return StepFunction(axis1(), std::move(out));
}

BoxFunction::BoxFunction(std::vector<Grid1D> axes, std::vector<double> values)
    : shape_(std::move(axes)), values_(std::move(values)) {
  for (const auto& a : shape_.axes())
    if (a.is_periodic()) throw Error(Errc::InvalidParameter, "box axes must be intervals");
  check_values(shape_, values_);
}

}  // namespace polya
