#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polya/functionals.hpp"
#include "polya/grid.hpp"
#include "polya/kernels.hpp"
#include "polya/seminorm.hpp"

namespace polya {

enum class EqualityTag { ConstantCase, CommonTranslate, ZeroCase, LevelwiseTranslate, Neither };

/// Discrete equality class. Shifts count half-cells of the original grid, i.e.
/// cells of the refined grid, with u(x) = u*(x + shift).
struct EqualityClass {
  EqualityTag tag = EqualityTag::Neither;
  std::ptrdiff_t shift = 0;
  std::vector<std::ptrdiff_t> level_shifts;
};

std::string to_string(const EqualityClass& c);

enum class EqualityContext { Circle, Euclidean, PeriodicPS, CylindricalPS };

/// Margins are RHS - LHS of the tested inequality, so a valid inequality gives margin >= 0.
/// Both sides are evaluated on the grid refined by 2, where rearrangements are exact.

/// Rearrangement inequality on the circle for a periodic kernel (heat family).
double check_riesz_circle(const StepFunction& f, const StepFunction& h, const KernelSpec& g);

/// E[u, v, g] - E[u*, v*, g*per]. The rearranged kernel is evaluated on the refined grid.
double check_nonexpansivity_circle(const StepFunction& u, const StepFunction& v, const ConvexJ& j,
                                   const KernelSpec& g);

/// Largest violation of A-invariance and B-monotonicity across level bands
/// (J normalized, kernel nonsingular). Zero or roundoff-sized when consistent.
double ab_consistency(const StepFunction& u, const StepFunction& v, const ConvexJ& j, const KernelSpec& g);

/// Euclidean energy margin with a Gaussian kernel; J(0) = 0 required.
double check_nonexpansivity_euclidean(const StepFunction& u, const StepFunction& v, const ConvexJ& j,
                                      const GaussianKernel& g);

struct PolyaMargin {
  double direct = 0.0;
  double laplace = 0.0;
  /// [u] on the refined grid, for relative tolerances.
  double scale = 0.0;
  bool divergent = false;
  bool has_laplace = false;
};

PolyaMargin check_polya_periodic(const StepFunction& u, const SeminormParams& params, bool with_laplace = true);
PolyaMargin check_polya_periodic(const GridFunctionND& u, const SeminormParams& params, bool with_laplace = true);
PolyaMargin check_polya_cylindrical(const GridFunctionND& u, const SeminormParams& params, bool with_laplace = true);

/// Equality classes for pairs (Circle, Euclidean) or single functions (PeriodicPS, v ignored).
/// Cost J selects the branch: strictly convex, |t| (levelwise) or other.
EqualityClass classify_equality(const StepFunction& u, const StepFunction& v, EqualityContext context,
                                const ConvexJ& j);
/// n = 2 Polya-Szego contexts; p = 1 uses levelwise translates.
EqualityClass classify_equality(const GridFunctionND& u, EqualityContext context, double p);

/// Refines one axis of a grid function by an integer factor.
GridFunctionND refine_axis(const GridFunctionND& u, std::size_t axis, std::size_t factor);

struct CaseRecord {
  std::string suite;
  std::string case_id;
  double margin = 0.0;
  std::string class_predicted;
  std::string class_observed;
  std::string status;
};

struct VerificationReport {
  std::string suite;
  std::size_t cases = 0;
  double min_margin = 0.0;
  double bound = 0.0;
  std::size_t equality_predicted_and_observed = 0;
  std::size_t equality_outside_classes = 0;
  std::size_t predicted_but_strict = 0;
  std::size_t strict_outside_classes = 0;
  std::size_t indeterminate = 0;
  std::vector<CaseRecord> records;
  std::vector<std::string> failures;

  bool passed() const noexcept { return failures.empty(); }
  void merge(const VerificationReport& other);
};

struct OracleConfig {
  std::size_t cells = 4;
  std::size_t levels = 3;
  double heat_time = 1.0;
  std::size_t budget = 20'000'000;
};

/// All pairs of level-quantized functions on `cells` cells under a heat kernel.
VerificationReport exhaustive_oracle_circle(const OracleConfig& cfg, const ConvexJ& j);

struct SuiteConfig {
  std::vector<std::string> suites{"all"};
  std::uint64_t seed = 7;
  /// Multiplies the default case counts of the randomized suites.
  double scale = 1.0;
  /// Suites run concurrently up to this many threads; results merge in suite order.
  std::size_t threads = 1;
};

/// Runs the named suites; deterministic for a given seed. Suites: smoke, riesz,
/// nonexp-circle, nonexp-rn, polya-per, polya-cyl, exhaustive, all.
VerificationReport run_suite(const SuiteConfig& cfg);

const std::vector<std::string>& suite_names();

}  // namespace polya
