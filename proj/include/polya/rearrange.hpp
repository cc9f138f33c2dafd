#pragma once

#include <cstddef>
#include <vector>

#include "polya/grid.hpp"

namespace polya {

/// Cells of an even-sized refined grid ordered by distance of the cell center
/// to the domain center, right cell first on ties.
std::vector<std::size_t> placement_order(std::size_t refined_cells);

/// Symmetric decreasing rearrangement about the domain center. The result lives
/// on the grid refined by 2 so that centered intervals of measure m*h are exact.
StepFunction symmetric_decreasing_1d(const StepFunction& u);

/// Periodic rearrangement of a function on one period [-pi, pi).
StepFunction periodic_rearrange_1d(const StepFunction& u);

/// Slicewise periodic rearrangement in x1; the x1 axis is refined by 2.
GridFunctionND periodic_rearrange_nd(const GridFunctionND& u);

/// Schwarz rearrangement of every frozen-x1 slice in x'. One perpendicular axis
/// uses the exact 1D operator (that axis is refined by 2); two or more use
/// schwarz_discrete_nd.
GridFunctionND cylindrical_rearrange(const GridFunctionND& u);

/// Discrete radial rearrangement on a box of dimension >= 2: sorted values are
/// assigned to cells sorted by distance of the center to the box center, ties
/// broken lexicographically on the index. Equimeasurable by construction,
/// approximate as a ball rearrangement.
BoxFunction schwarz_discrete_nd(const BoxFunction& v);

/// Steiner rearrangement along axis 0 of a box function; axis 0 is refined by 2.
BoxFunction steiner_rearrange(const BoxFunction& v);

StepFunction rearrange_set_periodic(const StepFunction& indicator);
GridFunctionND rearrange_set_cylindrical(const GridFunctionND& indicator);

/// Nondecreasing, lower semicontinuous staircase G on [0, inf):
/// G(t) = levels[j] where j = #{k : thresholds[k] < t}.
class Staircase {
 public:
  Staircase(std::vector<double> thresholds, std::vector<double> levels);

  double operator()(double t) const;

 private:
  std::vector<double> thresholds_;
  std::vector<double> levels_;
};

StepFunction compose(const Staircase& g, const StepFunction& u);

/// (G o u)^{*per} == G o u^{*per} cell by cell.
bool composition_commutes_check(const Staircase& g, const StepFunction& u);

}  // namespace polya
