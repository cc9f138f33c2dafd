#pragma once

#include <optional>
#include <string>

#include "polya/grid.hpp"
#include "polya/kernels.hpp"

namespace polya {

struct SeminormParams {
  double s = 0.5;
  double p = 1.0;

  double sigma() const noexcept { return s * p; }
  double lambda(std::size_t n) const noexcept { return (static_cast<double>(n) + s * p) / 2.0; }
};

void validate(const SeminormParams& params);

/// A seminorm value or the divergence signal for sp >= 1 on discontinuous step functions.
struct SeminormResult {
  double value = 0.0;
  bool divergent = false;
  std::string method;
  double tolerance = 0.0;
};

SeminormResult gagliardo_periodic_direct(const StepFunction& u, const SeminormParams& params);
SeminormResult gagliardo_periodic_direct(const StepFunction& u, const SeminormParams& params,
                                         const KernelWeights& riesz);
/// n = 2 (axis 0 periodic, axis 1 interval, values vanishing outside the box).
SeminormResult gagliardo_periodic_direct(const GridFunctionND& u, const SeminormParams& params);
SeminormResult gagliardo_periodic_direct(const GridFunctionND& u, const SeminormParams& params,
                                         const RieszWeights2D& riesz);

/// Laplace route: t-integral of heat-kernel energies. `cfg` supplies tolerance
/// and node budget; lambda and the z-range are derived from the grid and checked.
SeminormResult gagliardo_periodic_laplace(const StepFunction& u, const SeminormParams& params,
                                          const LaplaceConfig& cfg = {});
SeminormResult gagliardo_periodic_laplace(const GridFunctionND& u, const SeminormParams& params,
                                          const LaplaceConfig& cfg = {});

/// Sum over i in E, j not in E of the periodized Riesz weights with sigma = s.
double fractional_perimeter(const StepFunction& indicator, double s);
double fractional_perimeter(const StepFunction& indicator, const KernelWeights& riesz);
/// n = 2: the complement includes everything outside the x2 box.
double fractional_perimeter(const GridFunctionND& indicator, double s);

struct CoareaCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
};

/// [u]_{W^{s,1}} against 2 sum_k (tau_{k+1} - tau_k) P_s({u > tau_k}).
CoareaCheck coarea_identity_check(const StepFunction& u, double s);
CoareaCheck coarea_identity_check(const StepFunction& u, const KernelWeights& riesz);

}  // namespace polya
