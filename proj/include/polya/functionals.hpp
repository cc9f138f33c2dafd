#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "polya/grid.hpp"
#include "polya/kernels.hpp"

namespace polya {

/// Nonnegative convex cost J. derivative() is the left derivative, which is the
/// lower semicontinuous representative of J'; right_derivative() is kept for mirroring.
class ConvexJ {
 public:
  using Fn = std::function<double(double)>;

  struct Flags {
    bool strictly_convex = false;
    bool min_attained = true;
    double minimizer = 0.0;
    /// Exponent p when J is p-homogeneous about its minimizer.
    std::optional<double> power;
  };

  ConvexJ(std::string name, Fn value, Fn derivative, Fn right_derivative, Flags flags,
          std::vector<double> breakpoints = {});

  const std::string& name() const noexcept { return name_; }
  double operator()(double t) const { return value_(t); }
  double derivative(double t) const { return derivative_(t); }
  double right_derivative(double t) const { return right_derivative_(t); }
  bool strictly_convex() const noexcept { return flags_.strictly_convex; }
  bool min_attained() const noexcept { return flags_.min_attained; }
  double minimizer() const noexcept { return flags_.minimizer; }
  std::optional<double> power() const noexcept { return flags_.power; }
  const Flags& flags() const noexcept { return flags_; }
  const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }

  /// t -> J(-t).
  ConvexJ mirrored() const;

 private:
  std::string name_;
  Fn value_;
  Fn derivative_;
  Fn right_derivative_;
  Flags flags_;
  std::vector<double> breakpoints_;
};

/// abs, power(p), shifted_power(p, t0), one_sided(p), exp_increasing.
ConvexJ j_library(std::string_view name, const std::vector<double>& params = {});

/// Parses "power:2", "shifted_power:2:0.5", "abs", "one_sided", "exp_increasing".
ConvexJ parse_j(std::string_view spec);

/// t -> J(t + t0) - J(t0); throws NotAttained when inf J is not a minimum.
ConvexJ normalize(const ConvexJ& j);

/// J+ (J on [0, inf), 0 below) and J- (J on (-inf, 0), 0 above). Requires J(0) = 0 = min J.
std::pair<ConvexJ, ConvexJ> split_plus_minus(const ConvexJ& j);

struct EnergyResult {
  double value = 0.0;
  bool divergent = false;
  std::string method = "direct";
  std::string note;
};

/// sum_{i,j} J(u_i - v_j) W[i - j] over one period.
EnergyResult energy_circle(const StepFunction& u, const StepFunction& v, const ConvexJ& j, const KernelWeights& w);

/// Energy over R x R for functions vanishing outside the interval grid; the
/// exterior contributes J(u_i) and J(-v_j) against the kernel mass outside the box.
EnergyResult energy_euclidean(const StepFunction& u, const StepFunction& v, const ConvexJ& j, const KernelWeights& w);

struct LevelBand {
  double tau_lo = 0.0;
  double tau_hi = 0.0;
  /// Integrals of A and B over [tau_lo, tau_hi].
  double a_integral = 0.0;
  double b_integral = 0.0;
  /// A and B at the band midpoint.
  double a_mid = 0.0;
  double b_mid = 0.0;
};

struct ABDecomposition {
  std::vector<double> breakpoints;
  std::vector<LevelBand> bands;
  /// sum over bands of (A - B) integrals; equals the J+ energy.
  double energy = 0.0;
};

/// Level decomposition of the J+ energy on the circle. J+ must vanish on (-inf, 0].
ABDecomposition ab_decomposition(const StepFunction& u, const StepFunction& v, const ConvexJ& j_plus,
                                 const KernelWeights& w);

}  // namespace polya
