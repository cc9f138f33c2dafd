#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/zeta.hpp>

#include "doctest.h"
#include "polya/kernels.hpp"
#include "polya/special.hpp"
#include "test_util.hpp"

using namespace polya;
using polya::testing::rel_diff;

namespace {

constexpr double kPi = std::numbers::pi;

// tent * r^{-(1+sigma)} without 0 * inf when the tent rounds to zero near the singularity.
double singular_product(double tent, double r, double sigma) {
  if (tent <= 0.0 || r <= 0.0) return 0.0;
  return std::exp(std::log(tent) - (1.0 + sigma) * std::log(r));
}

// int_{cell 0} int_{cell m} |x - y|^{-(1+sigma)} as a tent integral over the offset z.
double riesz_oracle(long m, double h, double sigma) {
  boost::math::quadrature::tanh_sinh<double> ts;
  auto f = [&](double z) { const double c = static_cast<double>(m) * h;
    return singular_product(std::min(z - (c - h), c + h - z), z, sigma); };
  const double c = static_cast<double>(m) * h;
  return ts.integrate(f, c - h, c) + ts.integrate(f, c, c + h);
}

double heat_oracle(double z, double t) {
  double s = 0.0;
  for (int k = -40; k <= 40; ++k) s += std::exp(-std::pow(z + 2.0 * kPi * k, 2) * t);
  return s;
}

template <class G>
double tent_integral(G&& g, double c, double h) {
  using boost::math::quadrature::gauss_kronrod;
  auto f = [&](double z) { return (h - std::abs(z - c)) * g(z); };
  return gauss_kronrod<double, 31>::integrate(f, c - h, c, 15, 1e-14) +
         gauss_kronrod<double, 31>::integrate(f, c, c + h, 15, 1e-14);
}

}  // namespace

TEST_CASE("1D Riesz line weights against adaptive quadrature") {
  for (double sigma : {0.1, 0.5, 0.9}) {
    const double h = 2 * kPi / 8;
    double prev = INFINITY;
    for (long m = 1; m <= 40; ++m) {
      const double w = riesz_line_weight(static_cast<std::size_t>(m), h, sigma);
      CHECK(w > 0.0);
      CHECK(w < prev);
      prev = w;
      CAPTURE(sigma);
      CAPTURE(m);
      CHECK(rel_diff(w, riesz_oracle(m, h, sigma)) < 1e-9);
    }
  }
  CHECK_THROWS_AS(riesz_weights_1d(Grid1D::periodic(8), 0.0, true), Error);
  CHECK_THROWS_AS(riesz_weights_1d(Grid1D::periodic(8), 1.0, true), Error);
}

TEST_CASE("periodized Riesz weights against an explicit image sum") {
  const double sigma = 0.5;
  const auto g = Grid1D::periodic(8);
  const double h = g.width();
  const auto w = riesz_weights_1d(g, sigma, true);
  CHECK(w.singular());
  CHECK(w.table().size() == 8);
  for (long d = 0; d < 8; ++d) {
    // Images m = d + 8k, k in Z, excluding m = 0; tail beyond M by the midpoint integral.
    const long M = 4000;
    double s = 0.0;
    for (long m = -M; m <= M; ++m) {
      const long off = std::abs(d + 8 * m);
      if (off == 0) continue;
      if (off <= 200) s += riesz_oracle(off, h, sigma);
      else s += h * h * std::pow(static_cast<double>(off) * h, -1.0 - sigma) *
                (1.0 + (1.0 + sigma) * (2.0 + sigma) / (12.0 * static_cast<double>(off * off)));
    }
    const double edge = (static_cast<double>(8 * M) + 0.5 * 8) * h;
    s += 2.0 * h * std::pow(edge, -sigma) / (sigma * 8.0);
    CHECK(rel_diff(w(d), s) < 1e-9);
  }
  CHECK(check_kernel_monotone(w));
  for (double sg : {0.05, 0.3, 0.7, 0.95}) CHECK(check_kernel_monotone(riesz_weights_1d(Grid1D::periodic(16), sg, true)));
}

TEST_CASE("heat kernel: limits, symmetry and the dual representation") {
  const double g0 = heat_kernel_periodic(0.0, {10.0});
  CHECK(g0 >= 1.0);
  CHECK(g0 <= 1.0 + 2.0 * std::exp(-4 * kPi * kPi * 10.0) + 1e-16);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> z(-kPi, kPi);
  for (double t : {1e-3, 0.02, 0.3, 5.0}) {
    for (int k = 0; k < 20; ++k) {
      const double x = z(rng);
      const double v = heat_kernel_periodic(x, {t});
      CHECK(rel_diff(v, heat_kernel_periodic(-x, {t})) < 1e-14);
      CHECK(rel_diff(v, heat_kernel_periodic(x + 2 * kPi, {t})) < 1e-12);
      CHECK(rel_diff(v, heat_oracle(x, t)) < 1e-12);
    }
  }
  for (int k = 0; k < 100; ++k) {
    const double x = z(rng);
    CHECK(rel_diff(heat_kernel_direct(x, kHeatSwitchTime), heat_kernel_theta(x, kHeatSwitchTime)) < 1e-12);
  }
  CHECK_THROWS_AS(heat_kernel_periodic(0.0, {0.0}), Error);
  for (double t : {1e-4, 1e-2, 1.0, 100.0}) CHECK(heat_kernel_decreasing(t));
}

TEST_CASE("heat cell weights: total mass, monotonicity, quadrature") {
  for (double t : {0.01, 0.3, 2.0}) {
    const auto g = Grid1D::periodic(10);
    const auto w = heat_weights_periodic(g, t);
    double total = 0.0;
    for (std::size_t i = 0; i < 10; ++i) total += w.row_sum(i);
    CHECK(rel_diff(total, 2 * kPi * std::sqrt(kPi / t)) < 1e-12);
    CHECK(check_kernel_monotone(w));
    for (long d = 0; d < 10; ++d) {
      const double q = tent_integral([&](double x) { return heat_oracle(x, t); }, d * g.width(), g.width());
      CHECK(rel_diff(w(d), q) < 1e-11);
      CHECK(w(d) == w(-d));
    }
  }
  const auto shifted = heat_weights_periodic(Grid1D::periodic(8), HeatKernel{0.5, 0.3});
  const double h = 2 * kPi / 8;
  for (long d = 0; d < 8; ++d) {
    const double q = tent_integral([&](double x) { return heat_oracle(x - 0.3, 0.5); }, d * h, h);
    CHECK(rel_diff(shifted(d), q) < 1e-11);
  }
}

TEST_CASE("Gaussian interval weights") {
  const double t = 0.7;
  const auto g = Grid1D::interval(6, -1.5, 1.5);
  const auto w = gaussian_weights_interval(g, t);
  CHECK_FALSE(w.periodized());
  for (std::size_t i = 0; i < 6; ++i) {
    double row = w.row_sum(i) + w.exterior()[i];
    CHECK(rel_diff(row, g.width() * std::sqrt(kPi / t)) < 1e-13);
  }
  for (long d = -5; d <= 5; ++d) {
    CHECK(w(d) == w(-d));
    const double q = tent_integral([&](double x) { return std::exp(-x * x * t); }, d * g.width(), g.width());
    CHECK(rel_diff(w(d), q) < 1e-11);
  }
  // Tiny times keep the exterior mass accurate.
  const auto small = gaussian_weights_interval(g, 1e-6);
  for (std::size_t i = 0; i < 6; ++i)
    CHECK(rel_diff(small.row_sum(i) + small.exterior()[i], g.width() * std::sqrt(kPi / 1e-6)) < 1e-12);
}

TEST_CASE("kernel monotonicity guard") {
  const auto g = Grid1D::periodic(6);
  const KernelWeights flat(g, true, false, std::vector<double>(6, 1.0), {}, 0.0);
  CHECK_FALSE(check_kernel_monotone(flat));
  for (double t : {0.05, 0.1, 1.0, 30.0}) CHECK(check_kernel_monotone(heat_weights_periodic(g, t)));
  // At t = 1e-3 the offsets differ by about e^{-250} relative: numerically flat, so the guard refuses.
  CHECK_FALSE(check_kernel_monotone(heat_weights_periodic(g, 1e-3)));
  CHECK_THROWS_AS(KernelWeights(g, true, false, std::vector<double>(6, -1.0), {}, 0.0), Error);
}

TEST_CASE("Laplace quadrature reproduces the Gamma identity") {
  LaplaceConfig cfg;
  const auto rule = laplace_quadrature(cfg);
  CHECK(rel_diff(rule.apply(1.0), 1.0) < 1e-8);

  cfg.lambda = 0.75;
  cfg.z_min = 0.1;
  cfg.z_max = 10.0;
  const auto r75 = laplace_quadrature(cfg);
  for (double z : {0.1, 1.0, 10.0}) CHECK(rel_diff(r75.apply(z), std::tgamma(0.75) * std::pow(z, -0.75)) < 1e-8);

  LaplaceRule fine = r75;
  fine.step *= 0.5;
  fine.count *= 2;
  for (double z : {0.1, 1.0, 10.0}) CHECK(rel_diff(fine.apply(z), r75.apply(z)) < 1e-10);

  cfg.max_nodes = 10;
  CHECK_THROWS_AS(laplace_quadrature(cfg), Error);
}

namespace {

// Tent-weighted 2D Riesz integral over the support rectangle of offset (m, d2),
// in polar coordinates about the origin so the corner singularity is r^{-sigma}.
double riesz2d_polar_oracle(long m, long d2, double h1, double h2, double sigma) {
  boost::math::quadrature::tanh_sinh<double> ts(12);
  const double c1 = m * h1;
  const double c2 = d2 * h2;
  const double x0 = c1 - h1;
  const double x1 = c1 + h1;
  const double y0 = c2 - h2;
  const double y1 = c2 + h2;
  auto tent = [&](double z1, double z2) {
    return std::max(0.0, std::min(z1 - x0, x1 - z1)) * std::max(0.0, std::min(z2 - y0, y1 - z2));
  };
  auto radial = [&](double th) {
    const double c = std::cos(th);
    const double s = std::sin(th);
    double rmax = INFINITY;
    if (c > 0) rmax = std::min(rmax, x1 / c);
    if (c < 0) rmax = std::min(rmax, x0 / c);
    if (s > 0) rmax = std::min(rmax, y1 / s);
    if (s < 0) rmax = std::min(rmax, y0 / s);
    std::vector<double> cuts{0.0, rmax};
    for (double x : {x0, c1, x1})
      if (c != 0 && x / c > 0) cuts.push_back(x / c);
    for (double y : {y0, c2, y1})
      if (s != 0 && y / s > 0) cuts.push_back(y / s);
    std::sort(cuts.begin(), cuts.end());
    double acc = 0.0;
    auto f = [&](double r) { return singular_product(tent(r * c, r * s), r, sigma); };
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const double a = cuts[k];
      const double b = std::min(cuts[k + 1], rmax);
      if (b > a) acc += ts.integrate(f, a, b);
    }
    return acc;
  };
  // Split the full circle of directions at every tent breakpoint seen from the origin.
  std::vector<double> th{-kPi, kPi};
  for (double x : {x0, c1, x1})
    for (double y : {y0, c2, y1})
      if (x != 0 || y != 0) th.push_back(std::atan2(y, x));
  for (double a : {-kPi / 2, 0.0, kPi / 2}) th.push_back(a);
  std::sort(th.begin(), th.end());
  boost::math::quadrature::tanh_sinh<double> outer(10);
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < th.size(); ++k)
    if (th[k + 1] > th[k] + 1e-15) total += outer.integrate(radial, th[k], th[k + 1]);
  return total;
}

}  // namespace

TEST_CASE("2D Riesz weights: touching cells against a polar oracle") {
  const double h1 = 2 * kPi / 8;
  const double h2 = 0.5;
  for (double sigma : {0.3, 0.6}) {
    for (auto [m, d2] : std::vector<std::pair<long, long>>{{1, 0}, {1, 1}, {0, 1}, {2, 1}}) {
      double err = 0.0;
      const double w = riesz_line_weight_2d(m, d2, h1, h2, sigma, 1e-12, &err);
      CHECK(rel_diff(w, riesz2d_polar_oracle(m, d2, h1, h2, sigma)) < 1e-8);
    }
  }
}

TEST_CASE("2D Riesz weights: symmetry, far field and Monte Carlo") {
  const double sigma = 0.4;
  const std::vector<Grid1D> axes{Grid1D::periodic(8), Grid1D::interval(8, -2, 2)};
  const auto w = riesz_weights_nd(axes, sigma);
  const double h1 = axes[0].width();
  const double h2 = axes[1].width();
  for (long d1 = -7; d1 <= 7; ++d1)
    for (long d2 = -7; d2 <= 7; ++d2) {
      CHECK(w(d1, d2) == w(-d1, d2));
      CHECK(w(d1, d2) == w(d1, -d2));
    }
  CHECK(riesz_line_weight_2d(0, 0, h1, h2, sigma) == 0.0);
  // The periodized zero offset carries image mass only.
  double images = 0.0;
  for (long k = 1; k <= 400; ++k) images += 2.0 * riesz_line_weight_2d(8 * k, 0, h1, h2, sigma);
  CHECK(w(0, 0) > images);
  CHECK(rel_diff(w(0, 0), images) < 1e-3);

  // Far cells: midpoint asymptotics within 1 percent.
  for (auto [m, d2] : std::vector<std::pair<long, long>>{{12, 3}, {20, 0}, {5, 14}}) {
    const double mid = h1 * h1 * h2 * h2 * std::pow(std::hypot(m * h1, d2 * h2), -2.0 - sigma);
    CHECK(rel_diff(riesz_line_weight_2d(m, d2, h1, h2, sigma), mid) < 1e-2);
  }

  // Monte Carlo over separated cell pairs, 1e7 samples each, within 3 standard errors.
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (auto [m, d2] : std::vector<std::pair<long, long>>{{2, 0}, {3, 2}}) {
    const long n = 10'000'000;
    double s = 0.0;
    double s2 = 0.0;
    for (long k = 0; k < n; ++k) {
      const double z1 = (m + u01(rng) - u01(rng)) * h1;
      const double z2 = (d2 + u01(rng) - u01(rng)) * h2;
      const double f = std::pow(z1 * z1 + z2 * z2, -1.0 - 0.5 * sigma);
      s += f;
      s2 += f * f;
    }
    const double area = h1 * h1 * h2 * h2;
    const double mean = s / n;
    const double se = std::sqrt((s2 / n - mean * mean) / n);
    CHECK(std::abs(riesz_line_weight_2d(m, d2, h1, h2, sigma) - area * mean) < 3.0 * area * se);
  }
}

TEST_CASE("Hurwitz zeta against Riemann zeta identities") {
  for (double s : {1.05, 1.5, 2.0, 3.7, 9.0}) {
    const double z = boost::math::zeta(s);
    CHECK(rel_diff(hurwitz_zeta(s, 1.0), z) < 1e-14);
    CHECK(rel_diff(hurwitz_zeta(s, 0.5), (std::pow(2.0, s) - 1.0) * z) < 1e-14);
    CHECK(rel_diff(hurwitz_zeta(s, 2.0), z - 1.0) < 1e-13);
    for (double q : {0.01, 0.3, 0.75, 5.5, 40.0})
      CHECK(rel_diff(hurwitz_zeta(s, q) - hurwitz_zeta(s, q + 1.0), std::pow(q, -s)) < 1e-12);
  }
  CHECK_THROWS_AS(hurwitz_zeta(1.0, 1.0), Error);
}
