#pragma once

#include <span>

namespace polya {

/// Hurwitz zeta sum_{k>=0} (q + k)^{-s} for s > 1, q > 0 (Euler-Maclaurin).
double hurwitz_zeta(double s, double q);

/// Pairwise (cascade) summation with a fixed reduction tree, so the result
/// depends only on the input order.
double pairwise_sum(std::span<const double> xs);

}  // namespace polya
