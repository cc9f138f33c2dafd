#include <random>

#include "doctest.h"
#include "polya/rearrange.hpp"
#include "polya/verify.hpp"
#include "test_util.hpp"

using namespace polya;
using polya::testing::random_cells;

namespace {

std::vector<double> uniform(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

}  // namespace

TEST_CASE("rearrangement inequality on the circle") {
  std::mt19937_64 rng(1);
  const auto g = Grid1D::periodic(8);
  const KernelSpec heat = HeatKernel{0.5, 0.0};
  const auto f0 = StepFunction::constant(g, 2.0);
  CHECK(std::abs(check_riesz_circle(f0, StepFunction(g, random_cells(rng, 8, false)), heat)) < 1e-12);

  // Both are the same 3-half-cell translate of their rearrangements.
  const StepFunction f(g, {0, 1, 2, 1, 0, 0, 0, 0});
  const StepFunction h(g, {0, 2, 3, 2, 0, 0, 0, 0});
  CHECK(std::abs(check_riesz_circle(f, h, heat)) < 1e-12);

  int strict = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const StepFunction a(g, uniform(rng, 8, 0.0, 3.0));
    const StepFunction b(g, uniform(rng, 8, 0.0, 3.0));
    const double m = check_riesz_circle(a, b, heat);
    CHECK(m >= -1e-12);
    strict += m > 1e-10 ? 1 : 0;
  }
  CHECK(strict == 200);
}

TEST_CASE("nonexpansivity on the circle") {
  std::mt19937_64 rng(2);
  const auto g = Grid1D::periodic(8);
  const KernelSpec heat = HeatKernel{0.5, 0.0};
  const auto sq = j_library("power", {2.0});
  const auto abs = j_library("abs");
  const auto quartic = j_library("power", {4.0});
  for (int rep = 0; rep < 100; ++rep) {
    const StepFunction u(g, uniform(rng, 8, 0.0, 1.0));
    CHECK(std::abs(check_nonexpansivity_circle(u, StepFunction::constant(g, 0.7), sq, heat)) < 1e-11);
    const StepFunction above(g, uniform(rng, 8, 1.0, 2.0));
    CHECK(std::abs(check_nonexpansivity_circle(u, above, abs, heat)) < 1e-11);
    const StepFunction v(g, uniform(rng, 8, 0.0, 3.0));
    const double m = check_nonexpansivity_circle(u, v, quartic, heat);
    CHECK(m >= -1e-11);
    CHECK(classify_equality(u, v, EqualityContext::Circle, quartic).tag == EqualityTag::Neither);
    CHECK(m > 1e-10);
    CHECK(ab_consistency(u, v, sq, heat) <= 1e-10);
  }
}

TEST_CASE("nonexpansivity on the line") {
  std::mt19937_64 rng(3);
  const auto g = Grid1D::interval(6, -3.0, 3.0);
  const GaussianKernel gauss{0.6};
  const auto zero = StepFunction::constant(g, 0.0);
  for (const char* spec : {"abs", "power:2", "power:1.5", "one_sided:2"}) {
    const auto j = parse_j(spec);
    CHECK(std::abs(check_nonexpansivity_euclidean(StepFunction(g, random_cells(rng, 6, false)), zero, j, gauss)) <
          1e-11);
  }
  const StepFunction u(g, {0, 1, 2, 2, 1, 0});
  const StepFunction v(g, {0, 0, 1, 1, 0, 0});
  CHECK(std::abs(check_nonexpansivity_euclidean(u, v, j_library("power", {2.0}), gauss)) < 1e-11);
  for (int rep = 0; rep < 200; ++rep) {
    auto a = random_cells(rng, 6, false);
    auto b = random_cells(rng, 6, false);
    CHECK(check_nonexpansivity_euclidean(StepFunction(g, a), StepFunction(g, b), j_library("power", {2.0}), gauss) >=
          -1e-11);
  }
  CHECK_THROWS_AS(check_nonexpansivity_euclidean(u, v, parse_j("shifted_power:2:1"), gauss), Error);
}

TEST_CASE("Polya-Szego margins") {
  const auto g = Grid1D::periodic(4);
  // chi_(-1,2) + chi_(-1,0) on the period [-2, 2).
  const StepFunction two_step(g, {0, 2, 1, 1});
  const auto p1 = check_polya_periodic(two_step, {0.4, 1.0});
  CHECK(std::abs(p1.direct) <= 1e-12 * p1.scale);
  CHECK(std::abs(p1.laplace) <= 1e-8 * p1.scale);
  const auto p2 = check_polya_periodic(two_step, {0.3, 2.0});
  CHECK(p2.direct > 1e-6 * p2.scale);
  const auto abs = j_library("abs");
  const auto cls = classify_equality(two_step, two_step, EqualityContext::PeriodicPS, abs);
  CHECK(cls.tag == EqualityTag::LevelwiseTranslate);
  CHECK(cls.level_shifts.size() == 2);
  CHECK(cls.level_shifts[0] != cls.level_shifts[1]);

  const auto fixed = periodic_rearrange_1d(two_step);
  const auto at_fixed = check_polya_periodic(fixed, {0.3, 2.0});
  CHECK(std::abs(at_fixed.direct) <= 1e-12 * at_fixed.scale);

  std::mt19937_64 rng(4);
  for (int rep = 0; rep < 3; ++rep) {
    std::vector<double> v(64);
    std::uniform_real_distribution<double> d(0.0, 2.0);
    for (auto& x : v) x = d(rng);
    const GridFunctionND u({Grid1D::periodic(8), Grid1D::interval(8, -1.0, 1.0)}, v);
    const auto m = check_polya_periodic(u, {0.3, 2.0}, false);
    CHECK(m.direct >= -1e-12 * m.scale);
    const auto c = check_polya_cylindrical(u, {0.3, 2.0}, false);
    CHECK(c.direct >= -1e-12 * c.scale);
  }
  const auto big = check_polya_periodic(two_step, {0.6, 2.0});
  CHECK(big.divergent);
}

TEST_CASE("equality classes") {
  const auto g = Grid1D::periodic(8);
  const auto sq = j_library("power", {2.0});
  const auto c = StepFunction::constant(g, 1.0);
  const StepFunction u(g, {0, 1, 2, 1, 0, 0, 0, 0});
  const StepFunction v(g, {0, 2, 3, 2, 0, 0, 0, 0});
  CHECK(classify_equality(c, u, EqualityContext::Circle, sq).tag == EqualityTag::ConstantCase);
  const auto t = classify_equality(u, v, EqualityContext::Circle, sq);
  CHECK(t.tag == EqualityTag::CommonTranslate);
  CHECK(t.shift == 3);
  CHECK(to_string(t).find("CommonTranslate") != std::string::npos);
  const StepFunction w(g, {0, 0, 2, 3, 2, 0, 0, 0});
  CHECK(classify_equality(u, w, EqualityContext::Circle, sq).tag == EqualityTag::Neither);

  const auto line = Grid1D::interval(6, -3.0, 3.0);
  const auto zero = StepFunction::constant(line, 0.0);
  CHECK(classify_equality(StepFunction(line, {0, 1, 2, 0, 0, 0}), zero, EqualityContext::Euclidean, sq).tag ==
        EqualityTag::ZeroCase);
}

TEST_CASE("exhaustive oracle") {
  const auto bin_sq = exhaustive_oracle_circle({4, 2, 1.0}, j_library("power", {2.0}));
  CHECK(bin_sq.cases == 256);
  CHECK(bin_sq.passed());
  CHECK(bin_sq.equality_outside_classes == 0);
  CHECK(bin_sq.predicted_but_strict == 0);

  const auto bin_abs = exhaustive_oracle_circle({6, 2, 0.25}, j_library("abs"));
  CHECK(bin_abs.passed());
  CHECK(bin_abs.equality_outside_classes == 0);
  CHECK(bin_abs.predicted_but_strict == 0);

  const auto one = exhaustive_oracle_circle({4, 3, 1.0}, j_library("one_sided", {2.0}));
  CHECK(one.passed());
  CHECK(one.equality_outside_classes > 0);

  CHECK_THROWS_AS(exhaustive_oracle_circle({6, 3, 1.0, 100}, j_library("abs")), Error);
  CHECK_THROWS_AS(exhaustive_oracle_circle({4, 2, 1e-3}, j_library("abs")), Error);
}

TEST_CASE("suites are deterministic and pass") {
  const auto smoke = run_suite({{"smoke"}, 7, 1.0, 1});
  CHECK(smoke.passed());
  CHECK(smoke.cases > 0);
  CHECK(smoke.min_margin == 0.0);

  const SuiteConfig cfg{{"riesz", "nonexp-circle", "polya-per"}, 11, 0.05, 1};
  auto threaded = cfg;
  threaded.threads = 3;
  const auto a = run_suite(cfg);
  const auto b = run_suite(threaded);
  CHECK(a.passed());
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t k = 0; k < a.records.size(); ++k) {
    CHECK(a.records[k].case_id == b.records[k].case_id);
    CHECK(a.records[k].margin == b.records[k].margin);
    CHECK(a.records[k].status == b.records[k].status);
  }
  CHECK_THROWS_AS(run_suite({{"nope"}, 1, 1.0, 1}), Error);
}
