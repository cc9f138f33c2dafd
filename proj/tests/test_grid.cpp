#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "polya/grid.hpp"
#include "test_util.hpp"

using namespace polya;
using polya::testing::random_cells;

namespace {
constexpr double kPi = std::numbers::pi;

std::vector<double> vec(const StepFunction& u) { return {u.values().begin(), u.values().end()}; }
}  // namespace

TEST_CASE("refine repeats each value") {
  const auto g = Grid1D::periodic(2);
  CHECK(vec(refine(StepFunction(g, {3, 1}), 2)) == std::vector<double>{3, 3, 1, 1});
  const StepFunction u(Grid1D::periodic(4), {0, 3, 1, 2});
  CHECK(refine(u, 1) == u);
  CHECK(vec(refine(u, 3)) == std::vector<double>{0, 0, 0, 3, 3, 3, 1, 1, 1, 2, 2, 2});
  CHECK(refine(u, 3).grid().size() == 12);
  CHECK_THROWS_AS(refine(u, 0), Error);
}

TEST_CASE("step functions reject negative values and accept |.| preprocessing") {
  const auto g = Grid1D::periodic(3);
  CHECK_THROWS_AS(StepFunction(g, {1, -1, 0}), Error);
  CHECK(vec(StepFunction::from_signed(g, {1, -2, 0})) == std::vector<double>{1, 2, 0});
  CHECK_THROWS_AS(StepFunction(g, {1, 2}), Error);
}

TEST_CASE("superlevel measure") {
  const auto g = Grid1D::periodic(4);
  CHECK(superlevel_measure(StepFunction::constant(g, 2.0), 1.0) == doctest::Approx(2 * kPi).epsilon(1e-15));
  CHECK(superlevel_measure(StepFunction::constant(g, 2.0), 2.0) == 0.0);
  CHECK(superlevel_measure(StepFunction(g, {0, 3, 1, 2}), 1.5) == doctest::Approx(kPi).epsilon(1e-15));

  std::mt19937_64 rng(11);
  for (int k = 0; k < 200; ++k) {
    const StepFunction u(g, random_cells(rng, 4, k % 2 == 0));
    double prev = superlevel_measure(u, -1.0);
    for (double tau = -0.5; tau < 3.5; tau += 0.125) {
      const double m = superlevel_measure(u, tau);
      CHECK(m <= prev);
      prev = m;
    }
  }
}

TEST_CASE("equimeasurable compares distributions") {
  const auto g4 = Grid1D::periodic(4);
  const auto g2 = Grid1D::periodic(2);
  CHECK(equimeasurable(StepFunction(g4, {1, 2, 3, 0}), StepFunction(g4, {3, 0, 2, 1})));
  CHECK_FALSE(equimeasurable(StepFunction(g2, {1, 1}), StepFunction(g2, {2, 0})));
  CHECK_THROWS_AS(equimeasurable(StepFunction(g2, {1, 1}), StepFunction(Grid1D::interval(2, 0, 1), {1, 1})), Error);

  std::mt19937_64 rng(5);
  for (int k = 0; k < 1000; ++k) {
    const auto a = random_cells(rng, 6, true);
    auto b = a;
    std::shuffle(b.begin(), b.end(), rng);
    if (k % 3 == 0) b[k % 6] += 1.0;
    auto sa = a;
    auto sb = b;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    const auto g = Grid1D::periodic(6);
    CHECK(equimeasurable(StepFunction(g, a), StepFunction(g, b)) == (sa == sb));
    CHECK(equimeasurable(StepFunction(g, a), refine(StepFunction(g, a), 3)));
  }
}

TEST_CASE("layer cake value is a cell lookup") {
  const auto g = Grid1D::periodic(4);
  CHECK(layer_cake_value(StepFunction::constant(g, 1.5), 0.3) == 1.5);
  const StepFunction u(g, {0, 3, 1, 2});
  CHECK(layer_cake_value(u, -kPi / 4) == 3.0);
  CHECK(layer_cake_value(u, -kPi / 4 + 2 * kPi) == 3.0);
  CHECK_THROWS_AS(layer_cake_value(StepFunction(Grid1D::interval(2, 0, 1), {1, 2}), 2.0), Error);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> x(-kPi, kPi);
  const StepFunction v(Grid1D::periodic(10), random_cells(rng, 10, false));
  for (int k = 0; k < 100; ++k) {
    const double p = x(rng);
    const auto i = static_cast<std::size_t>(std::floor((p + kPi) / (2 * kPi / 10)));
    CHECK(layer_cake_value(v, p) == v[std::min<std::size_t>(i, 9)]);
  }
}

TEST_CASE("tensor grids index row-major") {
  const TensorGrid t({Grid1D::periodic(3), Grid1D::interval(4, -1, 1)});
  CHECK(t.size() == 12);
  const std::vector<std::size_t> idx{2, 1};
  CHECK(t.flat(idx) == 9);
  CHECK(t.unflat(9) == idx);
  CHECK(t.cell_volume() == doctest::Approx(2 * kPi / 3 * 0.5));
}
