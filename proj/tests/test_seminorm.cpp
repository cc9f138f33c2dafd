#include <cmath>
#include <random>

#include "doctest.h"
#include "polya/seminorm.hpp"
#include "test_util.hpp"

using namespace polya;
using polya::testing::random_cells;
using polya::testing::rel_diff;

namespace {

StepFunction random_set(const Grid1D& g, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.5);
  std::vector<double> v(g.size());
  for (auto& x : v) x = coin(rng) ? 1.0 : 0.0;
  return StepFunction(g, v);
}

StepFunction complement(const StepFunction& e) {
  std::vector<double> v(e.values().begin(), e.values().end());
  for (auto& x : v) x = 1.0 - x;
  return StepFunction(e.grid(), v);
}

StepFunction rotate(const StepFunction& u, std::size_t k) {
  std::vector<double> v(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) v[(i + k) % u.size()] = u[i];
  return StepFunction(u.grid(), v);
}

GridFunctionND random_2d(std::mt19937_64& rng, std::size_t n1, std::size_t n2) {
  std::uniform_real_distribution<double> d(0.0, 2.0);
  std::vector<double> v(n1 * n2);
  for (auto& x : v) x = d(rng);
  return GridFunctionND({Grid1D::periodic(n1), Grid1D::interval(n2, -1.0, 1.0)}, v);
}

}  // namespace

TEST_CASE("parameters") {
  CHECK_THROWS_AS(validate({0.0, 1.0}), Error);
  CHECK_THROWS_AS(validate({1.0, 1.0}), Error);
  CHECK_THROWS_AS(validate({0.5, 0.9}), Error);
  CHECK_NOTHROW(validate({0.4, 2.0}));
  const SeminormParams p{0.3, 2.0};
  CHECK(p.sigma() == doctest::Approx(0.6));
  CHECK(p.lambda(2) == doctest::Approx(1.3));
}

TEST_CASE("constants have zero seminorm; step functions diverge for sp >= 1") {
  const auto g = Grid1D::periodic(8);
  for (double c : {0.0, 1.0, 3.5}) {
    const auto u = StepFunction::constant(g, c);
    CHECK(gagliardo_periodic_direct(u, {0.4, 1.0}).value == 0.0);
    CHECK(gagliardo_periodic_laplace(u, {0.4, 1.0}).value == 0.0);
    const auto big = gagliardo_periodic_direct(u, {0.6, 2.0});
    CHECK_FALSE(big.divergent);
    CHECK(big.value == 0.0);
  }
  std::mt19937_64 rng(2);
  for (int rep = 0; rep < 50; ++rep) {
    auto v = random_cells(rng, 8, true);
    v[0] = 0.0;
    v[1] = 1.0;
    const StepFunction u(g, v);
    for (const SeminormParams& p : {SeminormParams{0.5, 2.0}, SeminormParams{0.9, 1.5}, SeminormParams{0.25, 4.0}}) {
      CHECK(gagliardo_periodic_direct(u, p).divergent);
      CHECK(gagliardo_periodic_laplace(u, p).divergent);
    }
  }
  const GridFunctionND zero({Grid1D::periodic(4), Grid1D::interval(4, -1.0, 1.0)}, std::vector<double>(16, 0.0));
  CHECK(gagliardo_periodic_direct(zero, {0.4, 1.0}).value == 0.0);
}

TEST_CASE("indicator seminorm is twice the fractional perimeter") {
  std::mt19937_64 rng(4);
  const auto g = Grid1D::periodic(16);
  for (double s : {0.3, 0.5}) {
    const auto w = riesz_weights_1d(g, s, true);
    for (int rep = 0; rep < 200; ++rep) {
      const auto e = random_set(g, rng);
      const double per = fractional_perimeter(e, w);
      CHECK(rel_diff(gagliardo_periodic_direct(e, {s, 1.0}, w).value, 2.0 * per) < 1e-14);
      CHECK(rel_diff(per, fractional_perimeter(complement(e), w)) < 1e-14);
    }
    CHECK(fractional_perimeter(StepFunction::constant(g, 0.0), w) == 0.0);
    CHECK(fractional_perimeter(StepFunction::constant(g, 1.0), w) == 0.0);
  }
  std::vector<double> half(16, 0.0);
  for (std::size_t i = 4; i < 12; ++i) half[i] = 1.0;
  const StepFunction arc(g, half);
  CHECK(rel_diff(fractional_perimeter(arc, 0.5), 0.5 * gagliardo_periodic_direct(arc, {0.5, 1.0}).value) < 1e-14);
  CHECK_THROWS_AS(fractional_perimeter(StepFunction(g, std::vector<double>(16, 0.5)), 0.5), Error);

  const GridFunctionND box({Grid1D::periodic(4), Grid1D::interval(4, -1.0, 1.0)},
                           {0, 0, 0, 0, 0, 1, 1, 0, 0, 1, 1, 0, 0, 0, 0, 0});
  CHECK(rel_diff(gagliardo_periodic_direct(box, {0.5, 1.0}).value, 2.0 * fractional_perimeter(box, 0.5)) < 1e-12);
}

TEST_CASE("direct and Laplace routes agree") {
  std::mt19937_64 rng(8);
  const auto g = Grid1D::periodic(8);
  for (int rep = 0; rep < 10; ++rep) {
    const StepFunction u(g, random_cells(rng, 8, false));
    for (const SeminormParams& p : {SeminormParams{0.4, 1.0}, SeminormParams{0.2, 2.0}, SeminormParams{0.7, 1.0}}) {
      const auto a = gagliardo_periodic_direct(u, p);
      const auto b = gagliardo_periodic_laplace(u, p);
      CHECK(rel_diff(a.value, b.value) < 1e-6);
    }
  }
  for (int rep = 0; rep < 2; ++rep) {
    const auto u = random_2d(rng, 8, 8);
    const SeminormParams p{0.4, 1.0};
    CHECK(rel_diff(gagliardo_periodic_direct(u, p).value, gagliardo_periodic_laplace(u, p).value) < 1e-6);
  }
}

TEST_CASE("homogeneity, translation and refinement invariance") {
  std::mt19937_64 rng(12);
  const auto g = Grid1D::periodic(8);
  for (int rep = 0; rep < 50; ++rep) {
    const auto cells = random_cells(rng, 8, false);
    const StepFunction u(g, cells);
    std::vector<double> twice(cells);
    for (auto& x : twice) x *= 2.0;
    for (const SeminormParams& p : {SeminormParams{0.4, 1.0}, SeminormParams{0.3, 3.0}}) {
      const double base = gagliardo_periodic_direct(u, p).value;
      CHECK(rel_diff(gagliardo_periodic_direct(StepFunction(g, twice), p).value, 2.0 * base) < 1e-13);
      CHECK(rel_diff(gagliardo_periodic_direct(rotate(u, 3), p).value, base) < 1e-13);
      for (std::size_t k : {2u, 3u}) CHECK(rel_diff(gagliardo_periodic_direct(refine(u, k), p).value, base) < 1e-11);
    }
  }
}

TEST_CASE("coarea identity") {
  std::mt19937_64 rng(16);
  for (std::size_t n : {4u, 8u, 16u}) {
    const auto g = Grid1D::periodic(n);
    for (double s : {0.3, 0.5}) {
      const auto w = riesz_weights_1d(g, s, true);
      for (int rep = 0; rep < 50; ++rep) {
        const StepFunction u(g, random_cells(rng, n, rep % 2 == 0));
        const auto c = coarea_identity_check(u, w);
        CHECK(c.residual <= 1e-12);
      }
      const auto e = random_set(g, rng);
      std::vector<double> scaled(e.values().begin(), e.values().end());
      for (auto& x : scaled) x *= 2.5;
      const auto c = coarea_identity_check(StepFunction(g, scaled), w);
      CHECK(rel_diff(c.lhs, 2.0 * 2.5 * fractional_perimeter(e, w)) < 1e-13);
      const auto flat = coarea_identity_check(StepFunction::constant(g, 1.0), w);
      CHECK(flat.lhs == 0.0);
      CHECK(flat.rhs == 0.0);
    }
  }
}
