#include "polya/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace polya {

std::vector<std::size_t> placement_order(std::size_t refined_cells) {
  if (refined_cells % 2 != 0) throw Error(Errc::InvalidParameter, "placement needs an even cell count");
  const std::size_t half = refined_cells / 2;
  std::vector<std::size_t> order;
  order.reserve(refined_cells);
  for (std::size_t k = 0; k < half; ++k) {
    order.push_back(half + k);
    order.push_back(half - 1 - k);
  }
  return order;
}

namespace {

/// Indices sorted by (value desc, index asc).
std::vector<std::size_t> descending_ranks(std::span<const double> values) {
  std::vector<std::size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  return idx;
}

std::vector<double> rearrange_cells(std::span<const double> values) {
  const auto ranks = descending_ranks(values);
  const auto order = placement_order(2 * values.size());
  std::vector<double> out(2 * values.size());
  for (std::size_t k = 0; k < ranks.size(); ++k) {
    out[order[2 * k]] = values[ranks[k]];
    out[order[2 * k + 1]] = values[ranks[k]];
  }
  return out;
}

void require_indicator(std::span<const double> values) {
  for (double v : values)
    if (v != 0.0 && v != 1.0) throw Error(Errc::NotIndicator, "set indicators take values in {0, 1}");
}

}  // namespace

StepFunction symmetric_decreasing_1d(const StepFunction& u) {
  return StepFunction(u.grid().refined(2), rearrange_cells(u.values()));
}

StepFunction periodic_rearrange_1d(const StepFunction& u) {
  if (!u.grid().is_periodic()) throw Error(Errc::NotPeriodic, "periodic rearrangement needs a periodic grid");
  return symmetric_decreasing_1d(u);
}

GridFunctionND periodic_rearrange_nd(const GridFunctionND& u) {
  auto axes = u.shape().axes();
  axes[0] = axes[0].refined(2);
  const std::size_t n1 = u.axis1().size();
  const std::size_t perp = u.perp_size();
  std::vector<double> out(2 * n1 * perp);
  for (std::size_t p = 0; p < perp; ++p) {
    const auto slice = periodic_rearrange_1d(u.x1_slice(p));
    for (std::size_t i = 0; i < 2 * n1; ++i) out[i * perp + p] = slice[i];
  }
  return GridFunctionND(std::move(axes), std::move(out));
}

BoxFunction schwarz_discrete_nd(const BoxFunction& v) {
  const auto& shape = v.shape();
  if (shape.rank() < 2) throw Error(Errc::InvalidParameter, "schwarz_discrete_nd needs dimension >= 2");
  const std::size_t n = shape.size();
  std::vector<double> dist2(n, 0.0);
  for (std::size_t f = 0; f < n; ++f) {
    const auto idx = shape.unflat(f);
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const auto& ax = shape.axis(k);
      const double d = ax.cell_center(idx[k]) - ax.center();
      dist2[f] += d * d;
    }
  }
  std::vector<std::size_t> cells(n);
  std::iota(cells.begin(), cells.end(), 0);
  // Flat order is lexicographic, so a stable sort on distance breaks ties lexicographically.
  std::stable_sort(cells.begin(), cells.end(), [&](std::size_t a, std::size_t b) { return dist2[a] < dist2[b]; });
  const auto ranks = descending_ranks(v.values());
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) out[cells[k]] = v.values()[ranks[k]];
  return BoxFunction(shape.axes(), std::move(out));
}

BoxFunction steiner_rearrange(const BoxFunction& v) {
  const auto& shape = v.shape();
  auto axes = shape.axes();
  axes[0] = axes[0].refined(2);
  const std::size_t n0 = shape.axis(0).size();
  const std::size_t rest = shape.stride(0);
  std::vector<double> out(2 * n0 * rest);
  std::vector<double> line(n0);
  for (std::size_t p = 0; p < rest; ++p) {
    for (std::size_t i = 0; i < n0; ++i) line[i] = v.values()[i * rest + p];
    const auto r = rearrange_cells(line);
    for (std::size_t i = 0; i < 2 * n0; ++i) out[i * rest + p] = r[i];
  }
  return BoxFunction(std::move(axes), std::move(out));
}

GridFunctionND cylindrical_rearrange(const GridFunctionND& u) {
  const auto& shape = u.shape();
  if (shape.rank() < 2) throw Error(Errc::InvalidParameter, "cylindrical rearrangement needs n >= 2");
  const std::size_t n1 = u.axis1().size();
  const std::size_t perp = u.perp_size();
  std::vector<Grid1D> perp_axes(shape.axes().begin() + 1, shape.axes().end());

  if (perp_axes.size() == 1) {
    auto axes = shape.axes();
    axes[1] = axes[1].refined(2);
    std::vector<double> out(n1 * 2 * perp);
    for (std::size_t i = 0; i < n1; ++i) {
      const auto slice = rearrange_cells(u.values().subspan(i * perp, perp));
      std::copy(slice.begin(), slice.end(), out.begin() + static_cast<std::ptrdiff_t>(i * 2 * perp));
    }
    return GridFunctionND(std::move(axes), std::move(out));
  }

  std::vector<double> out(u.values().begin(), u.values().end());
  for (std::size_t i = 0; i < n1; ++i) {
    const auto slice = u.values().subspan(i * perp, perp);
    const BoxFunction box(perp_axes, std::vector<double>(slice.begin(), slice.end()));
    const auto r = schwarz_discrete_nd(box);
    std::copy(r.values().begin(), r.values().end(), out.begin() + static_cast<std::ptrdiff_t>(i * perp));
  }
  return GridFunctionND(shape.axes(), std::move(out));
}

StepFunction rearrange_set_periodic(const StepFunction& indicator) {
  require_indicator(indicator.values());
  return periodic_rearrange_1d(indicator);
}

GridFunctionND rearrange_set_cylindrical(const GridFunctionND& indicator) {
  require_indicator(indicator.values());
  return cylindrical_rearrange(indicator);
}

Staircase::Staircase(std::vector<double> thresholds, std::vector<double> levels)
    : thresholds_(std::move(thresholds)), levels_(std::move(levels)) {
  if (levels_.size() != thresholds_.size() + 1)
    throw Error(Errc::InvalidParameter, "staircase needs one more level than thresholds");
  if (!std::is_sorted(thresholds_.begin(), thresholds_.end()) || !std::is_sorted(levels_.begin(), levels_.end()))
    throw Error(Errc::InvalidParameter, "staircase must be nondecreasing with sorted thresholds");
  if (levels_.front() < 0.0) throw Error(Errc::NegativeValue, "staircase levels must be nonnegative");
}

double Staircase::operator()(double t) const {
  const auto j = std::lower_bound(thresholds_.begin(), thresholds_.end(), t) - thresholds_.begin();
  return levels_[static_cast<std::size_t>(j)];
}

StepFunction compose(const Staircase& g, const StepFunction& u) {
  std::vector<double> out(u.size());
  std::transform(u.values().begin(), u.values().end(), out.begin(), [&](double x) { return g(x); });
  return StepFunction(u.grid(), std::move(out));
}

bool composition_commutes_check(const Staircase& g, const StepFunction& u) {
  return symmetric_decreasing_1d(compose(g, u)) == compose(g, symmetric_decreasing_1d(u));
}

}  // namespace polya
