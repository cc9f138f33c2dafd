#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "polya/kernels.hpp"
#include "polya/special.hpp"

namespace polya {

namespace {

using boost::math::quadrature::gauss;
using boost::math::quadrature::gauss_kronrod;

struct Riesz2D {
  double h1;
  double h2;
  double sigma;
  double tol;
  double a;  // half the kernel exponent, |z|^{-2a}
  double err = 0.0;

  double f(double z1, double z2) const { return std::pow(z1 * z1 + z2 * z2, -a); }
};

// Relative targets much below 1e-13 only drive the adaptive rule to its depth limit.
constexpr double kRelFloor = 1e-13;
constexpr unsigned kMaxDepth = 12;

template <class F>
double gk(F&& fn, double lo, double hi, double tol, double& err) {
  double e = 0.0;
  const double v = gauss_kronrod<double, 21>::integrate(fn, lo, hi, kMaxDepth, std::max(tol, kRelFloor), &e);
  err += e;
  return v;
}

// Integral of a bilinear weight P(x, y) = c1 x + c2 y + c3 x y against
// (x^2 + y^2)^{-a} over [0,A] x [0,B]: Duffy split on the diagonal, u-direction in closed form.
double singular_corner(const Riesz2D& k, double A, double B, double c1, double c2, double c3, double& err) {
  const double e0 = 1.0 / (1.0 - k.sigma);
  const double e1 = 1.0 / (2.0 - k.sigma);
  auto lower = [&](double v) {
    return ((c1 * A + c2 * B * v) * e0 + c3 * A * B * v * e1) * std::pow(A * A + B * B * v * v, -k.a);
  };
  auto upper = [&](double v) {
    return ((c1 * A * v + c2 * B) * e0 + c3 * A * B * v * e1) * std::pow(A * A * v * v + B * B, -k.a);
  };
  const double tol = k.tol * 1e-2;
  return A * B * (gk(lower, 0.0, 1.0, tol, err) + gk(upper, 0.0, 1.0, tol, err));
}

template <int Points, class W>
double tensor_gauss(const Riesz2D& k, double x0, double x1, double y0, double y1, W&& w) {
  auto inner = [&](double z1) {
    return gauss<double, Points>::integrate([&](double z2) { return w(z1, z2) * k.f(z1, z2); }, y0, y1);
  };
  return gauss<double, Points>::integrate(inner, x0, x1);
}

// One quarter of the tent support: s1 in [s1a, s1a + h1], s2 in [s2a, s2a + h2] in units of
// cells; offsets and corners are integers so the origin test is exact.
double quarter(Riesz2D& k, long m, long d2, int q1, int q2) {
  const long za1 = m + q1;
  const long zb1 = za1 + 1;
  const long za2 = d2 + q2;
  const long zb2 = za2 + 1;
  const double x0 = static_cast<double>(za1) * k.h1;
  const double x1 = static_cast<double>(zb1) * k.h1;
  const double y0 = static_cast<double>(za2) * k.h2;
  const double y1 = static_cast<double>(zb2) * k.h2;
  const double c1 = static_cast<double>(m) * k.h1;
  const double c2 = static_cast<double>(d2) * k.h2;
  auto w = [&](double z1, double z2) {
    return std::max(0.0, k.h1 - std::abs(z1 - c1)) * std::max(0.0, k.h2 - std::abs(z2 - c2));
  };

  const bool corner1 = za1 == 0 || zb1 == 0;
  const bool corner2 = za2 == 0 || zb2 == 0;
  if (corner1 && corner2) {
    const double sx = za1 == 0 ? 1.0 : -1.0;
    const double sy = za2 == 0 ? 1.0 : -1.0;
    const double A = k.h1;
    const double B = k.h2;
    auto P = [&](double x, double y) { return w(sx * x, sy * y); };
    const double p00 = P(0.0, 0.0);
    const double pa = P(A, 0.0);
    const double pb = P(0.0, B);
    const double pab = P(A, B);
    // Tent weights vanish at the coincident corner only when the cells touch there;
    // otherwise the constant part carries a |z|^{-2a} singularity that is not integrable.
    if (p00 > 0.0) throw Error(Errc::StepFunctionDivergence, "nonzero weight at the kernel singularity");
    const double cx = (pa - p00) / A;
    const double cy = (pb - p00) / B;
    const double cxy = (pab - pa - pb + p00) / (A * B);
    return singular_corner(k, A, B, cx, cy, cxy, k.err);
  }

  const double dz1 = za1 > 0 ? x0 : (zb1 < 0 ? -x1 : 0.0);
  const double dz2 = za2 > 0 ? y0 : (zb2 < 0 ? -y1 : 0.0);
  const double dist = std::hypot(dz1, dz2);
  const double half = 0.5 * std::max(k.h1, k.h2);
  if (dist < 8.0 * half) {
    const double tol = k.tol * 1e-2;
    double& err = k.err;
    auto inner = [&](double z1) {
      return gauss_kronrod<double, 21>::integrate([&](double z2) { return w(z1, z2) * k.f(z1, z2); }, y0, y1,
                                                  kMaxDepth, kRelFloor);
    };
    return gk(inner, x0, x1, tol, err);
  }
  if (dist < 40.0 * half) return tensor_gauss<10>(k, x0, x1, y0, y1, w);
  return tensor_gauss<5>(k, x0, x1, y0, y1, w);
}

double line_weight(Riesz2D& k, long m, long d2) {
  m = std::abs(m);
  d2 = std::abs(d2);
  if (m == 0 && d2 == 0) return 0.0;
  double sum = 0.0;
  for (int q1 : {-1, 0})
    for (int q2 : {-1, 0}) sum += quarter(k, m, d2, q1, q2);
  return sum;
}

}  // namespace

double riesz_line_weight_2d(long m, long d2, double h1, double h2, double sigma, double tolerance,
                            double* error_estimate) {
  if (!(sigma > 0.0) || sigma >= 1.0) throw Error(Errc::SigmaOutOfRange, "sigma must lie in (0, 1)");
  Riesz2D k{h1, h2, sigma, tolerance, 1.0 + 0.5 * sigma};
  const double w = line_weight(k, m, d2);
  if (error_estimate) *error_estimate = k.err;
  return w;
}

RieszWeights2D::RieszWeights2D(Grid1D axis1, Grid1D axis2, double sigma, std::vector<double> table,
                               std::vector<double> exterior, double accuracy)
    : axis1_(axis1),
      axis2_(axis2),
      sigma_(sigma),
      table_(std::move(table)),
      exterior_(std::move(exterior)),
      accuracy_(accuracy) {
  if (table_.size() != axis1_.size() * (2 * axis2_.size() - 1) || exterior_.size() != axis2_.size())
    throw Error(Errc::GridMismatch, "2D weight table does not match its axes");
}

double RieszWeights2D::operator()(std::ptrdiff_t d1, std::ptrdiff_t d2) const {
  const auto n1 = static_cast<std::ptrdiff_t>(axis1_.size());
  const auto n2 = static_cast<std::ptrdiff_t>(axis2_.size());
  if (d2 <= -n2 || d2 >= n2) throw Error(Errc::OutOfDomain, "x2 offset outside the table");
  const auto r = static_cast<std::size_t>(((d1 % n1) + n1) % n1);
  return table_[r * static_cast<std::size_t>(2 * n2 - 1) + static_cast<std::size_t>(d2 + n2 - 1)];
}

RieszWeights2D riesz_weights_nd(std::span<const Grid1D> axes, double sigma, double tolerance) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw Error(Errc::SigmaOutOfRange, "sigma must lie in (0, 1)");
  if (sigma >= 1.0) throw Error(Errc::StepFunctionDivergence, "adjacent-cell weights diverge for sigma >= 1");
  if (axes.size() != 2) throw Error(Errc::InvalidParameter, "ND Riesz weights are implemented for n = 2");
  const Grid1D& g1 = axes[0];
  const Grid1D& g2 = axes[1];
  if (!g1.is_periodic() || g2.is_periodic()) throw Error(Errc::NotPeriodic, "axis x1 periodic, axis x2 interval");

  const auto n1 = static_cast<long>(g1.size());
  const auto n2 = static_cast<long>(g2.size());
  const double h1 = g1.width();
  const double h2 = g2.width();
  Riesz2D k{h1, h2, sigma, tolerance, 1.0 + 0.5 * sigma};

  // Explicit images while the x2 spread is not negligible against the x1 distance.
  const double reach = std::max(2.0 * std::numbers::pi, g2.length());
  const long m_max = std::max(64 * n1, static_cast<long>(std::ceil(64.0 * reach / h1)));

  // line[m][d2] for m in [0, m_max], d2 in [0, n2).
  std::vector<double> line(static_cast<std::size_t>((m_max + 1) * n2));
  for (long m = 0; m <= m_max; ++m)
    for (long d = 0; d < n2; ++d) line[static_cast<std::size_t>(m * n2 + d)] = line_weight(k, m, d);

  const double a = k.a;
  const double period = static_cast<double>(n1) * h1;
  // First-order far-field sum over one residue class, m = r + j n1 with j >= j0.
  auto class_tail = [&](long r, long j0, double y) {
    const double q = static_cast<double>(j0) + static_cast<double>(r) / static_cast<double>(n1);
    const double b0 = 2.0 * a;
    const double corr = -a * y * y + (h1 * h1 / 12.0) * 2.0 * a * (2.0 * a + 1.0) - (h2 * h2 / 12.0) * 2.0 * a;
    return h1 * h1 * h2 * h2 *
           (std::pow(period, -b0) * hurwitz_zeta(b0, q) + corr * std::pow(period, -b0 - 2.0) * hurwitz_zeta(b0 + 2.0, q));
  };
  auto class_sum = [&](long r, long d) {
    // sum over m >= 0 with m = r mod n1 (r in [0, n1)), starting at m = r.
    double s = 0.0;
    long m = r;
    long j = 0;
    for (; m <= m_max; m += n1, ++j) s += line[static_cast<std::size_t>(m * n2 + d)];
    return s + class_tail(r, j, static_cast<double>(d) * h2);
  };

  const auto cols = static_cast<std::size_t>(2 * n2 - 1);
  std::vector<double> table(static_cast<std::size_t>(n1) * cols);
  for (long r = 0; r < n1; ++r) {
    for (long d = 0; d < n2; ++d) {
      // Positive side m = r + j n1 and negative side |m| = (n1 - r) + j n1; r = 0 counts m = 0 once.
      double v = class_sum(r, d);
      v += r == 0 ? class_sum(0, d) - line[static_cast<std::size_t>(d)] : class_sum(n1 - r, d);
      if (r == 0 && d == 0) v = class_sum(0, 0) * 2.0 - line[0];
      table[static_cast<std::size_t>(r) * cols + static_cast<std::size_t>(n2 - 1 + d)] = v;
      table[static_cast<std::size_t>(r) * cols + static_cast<std::size_t>(n2 - 1 - d)] = v;
    }
  }

  // Exterior: integrating |z|^{-(2+sigma)} over z1 in R leaves b |z2|^{-(1+sigma)}.
  const double b = std::sqrt(std::numbers::pi) * std::tgamma(0.5 * (1.0 + sigma)) / std::tgamma(1.0 + 0.5 * sigma);
  std::vector<double> exterior(static_cast<std::size_t>(n2));
  for (long i = 0; i < n2; ++i) {
    const double right = static_cast<double>(n2 - 1 - i) * h2;
    const double left = static_cast<double>(i) * h2;
    auto ext = [&](double a0) {
      return (std::pow(a0 + h2, 1.0 - sigma) - std::pow(a0, 1.0 - sigma)) / (sigma * (1.0 - sigma));
    };
    exterior[static_cast<std::size_t>(i)] = h1 * b * (ext(right) + ext(left));
  }

  double total = 0.0;
  for (double v : table) total += v;
  const double accuracy = total > 0.0 ? std::max(k.err / total, 1e-14) : 1e-14;
  if (accuracy > 100.0 * tolerance) throw Error(Errc::ToleranceNotMet, "2D weight quadrature missed its tolerance");
  return RieszWeights2D(g1, g2, sigma, std::move(table), std::move(exterior), accuracy);
}

}  // namespace polya
