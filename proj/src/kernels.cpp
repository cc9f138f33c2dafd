#include "polya/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>

#include "polya/special.hpp"

namespace polya {

namespace {

constexpr double kPi = std::numbers::pi;

void require_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw Error(Errc::NonpositiveTime, "diffusion time must be positive");
}

void require_sigma(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw Error(Errc::SigmaOutOfRange, "sigma must lie in (0, 1)");
  if (sigma >= 1.0)
    throw Error(Errc::StepFunctionDivergence, "adjacent-cell weights diverge for sigma >= 1");
}

// Second antiderivative of exp(-r^2 t), even in r.
double gauss_k2(double r, double t) {
  const double rt = std::sqrt(t);
  const double k1 = 0.5 * std::sqrt(kPi) / rt * std::erf(rt * r);
  return r * k1 + std::expm1(-r * r * t) / (2.0 * t);
}

// Second antiderivative shifted by its linear asymptote, accurate for large r.
double gauss_r(double r, double t) {
  const double rt = std::sqrt(t);
  return (std::exp(-r * r * t) - std::sqrt(kPi * t) * r * std::erfc(rt * r)) / (2.0 * t);
}

// int_{[0,h]^2} exp(-(x - y + c)^2 t) dx dy for a cell pair at center distance c.
double gauss_line_weight(double c, double h, double t) {
  c = std::abs(c);
  if (std::sqrt(t) * (c - h) >= 1.0) return gauss_r(c + h, t) - 2.0 * gauss_r(c, t) + gauss_r(c - h, t);
  return gauss_k2(c + h, t) - 2.0 * gauss_k2(c, t) + gauss_k2(std::abs(c - h), t);
}

// int_{a0}^{a0+h} T(a) da with T(a) = int_a^inf exp(-r^2 t) dr. The antiderivative
// a T(a) - exp(-a^2 t) / (2t) is split so the two 1/(2t)-sized parts never cancel.
double gauss_exterior(double a0, double h, double t) {
  const double rt = std::sqrt(t);
  const double c = 0.5 * std::sqrt(kPi) / rt;
  const double a1 = a0 + h;
  const double linear = a1 * c * std::erfc(rt * a1) - a0 * c * std::erfc(rt * a0);
  const double decay = -std::exp(-a0 * a0 * t) * std::expm1(-(a1 * a1 - a0 * a0) * t) / (2.0 * t);
  return linear + decay;
}

double riesz_exterior(double a0, double h, double sigma) {
  return (std::pow(a0 + h, 1.0 - sigma) - std::pow(a0, 1.0 - sigma)) / (sigma * (1.0 - sigma));
}

// Rising-factorial coefficients of the midpoint expansion of the second difference
// of r^{1-sigma}/(sigma(sigma-1)): sum_j c_j h^{2+2j} r^{-(alpha+2j)}.
std::array<double, 4> riesz_series_coeffs(double alpha) {
  const double a = alpha;
  return {1.0, a * (a + 1.0) / 12.0, a * (a + 1.0) * (a + 2.0) * (a + 3.0) / 360.0,
          a * (a + 1.0) * (a + 2.0) * (a + 3.0) * (a + 4.0) * (a + 5.0) / 20160.0};
}

constexpr std::size_t kRieszSeriesFrom = 32;

// sum_{k >= 0} W(a + k n) over one residue class; explicit up to `explicit_max` then zeta tail.
double riesz_class_sum(std::size_t a, std::size_t n, std::size_t explicit_max, double h, double sigma) {
  double sum = 0.0;
  std::size_t m = a;
  std::size_t k = 0;
  for (; m <= explicit_max; m += n, ++k) sum += riesz_line_weight(m, h, sigma);
  const double alpha = 1.0 + sigma;
  const auto c = riesz_series_coeffs(alpha);
  const double nh = static_cast<double>(n) * h;
  const double q = static_cast<double>(k) + static_cast<double>(a) / static_cast<double>(n);
  double tail = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) {
    const double beta = alpha + 2.0 * static_cast<double>(j);
    tail += c[j] * std::pow(h, 2.0 + 2.0 * static_cast<double>(j)) * std::pow(nh, -beta) * hurwitz_zeta(beta, q);
  }
  return sum + tail;
}

int image_count(double t, double period) {
  return static_cast<int>(std::ceil(std::sqrt(45.0 / t) / period)) + 2;
}

}  // namespace

KernelSpec symmetrized(const KernelSpec& spec) {
  if (const auto* heat = std::get_if<HeatKernel>(&spec)) return HeatKernel{heat->t, 0.0};
  return spec;
}

KernelWeights::KernelWeights(Grid1D grid, bool periodized, bool singular, std::vector<double> table,
                             std::vector<double> exterior, double accuracy)
    : grid_(grid),
      periodized_(periodized),
      singular_(singular),
      table_(std::move(table)),
      exterior_(std::move(exterior)),
      accuracy_(accuracy) {
  const std::size_t n = grid_.size();
  const std::size_t expected = periodized_ ? n : 2 * n - 1;
  if (table_.size() != expected) throw Error(Errc::GridMismatch, "weight table size does not match the grid");
  if (!exterior_.empty() && exterior_.size() != n)
    throw Error(Errc::GridMismatch, "exterior masses need one entry per cell");
  for (double w : table_)
    if (!(w >= 0.0) || !std::isfinite(w)) throw Error(Errc::InvalidParameter, "weights must be finite and >= 0");
}

double KernelWeights::operator()(std::ptrdiff_t d) const {
  const auto n = static_cast<std::ptrdiff_t>(grid_.size());
  if (periodized_) return table_[static_cast<std::size_t>(((d % n) + n) % n)];
  if (d <= -n || d >= n) throw Error(Errc::OutOfDomain, "offset outside the line table");
  return table_[static_cast<std::size_t>(d + n - 1)];
}

double KernelWeights::row_sum(std::size_t i) const {
  const auto n = static_cast<std::ptrdiff_t>(grid_.size());
  std::vector<double> row(grid_.size());
  for (std::ptrdiff_t j = 0; j < n; ++j) row[static_cast<std::size_t>(j)] = (*this)(static_cast<std::ptrdiff_t>(i) - j);
  return pairwise_sum(row);
}

double riesz_line_weight(std::size_t m, double h, double sigma) {
  if (m == 0) return 0.0;
  const double alpha = 1.0 + sigma;
  if (m >= kRieszSeriesFrom) {
    const auto c = riesz_series_coeffs(alpha);
    const double r = static_cast<double>(m) * h;
    double w = 0.0;
    for (std::size_t j = c.size(); j-- > 0;)
      w += c[j] * std::pow(h, 2.0 + 2.0 * static_cast<double>(j)) * std::pow(r, -alpha - 2.0 * static_cast<double>(j));
    return w;
  }
  const double g = static_cast<double>(m - 1) * h;
  const double e = 1.0 - sigma;
  const double second = std::pow(g + 2.0 * h, e) - 2.0 * std::pow(g + h, e) + std::pow(g, e);
  return second / (sigma * (sigma - 1.0));
}

KernelWeights riesz_weights_1d(const Grid1D& grid, double sigma, bool periodized) {
  require_sigma(sigma);
  const std::size_t n = grid.size();
  const double h = grid.width();
  if (periodized) {
    if (!grid.is_periodic()) throw Error(Errc::NotPeriodic, "periodized weights need a periodic grid");
    const std::size_t explicit_max = 64 * n;
    std::vector<double> table(n, 0.0);
    for (std::size_t d = 0; d < n; ++d) {
      // Offsets m = d + kN for k >= 0 and |m| = (N - d) + kN on the negative side.
      const double pos = d == 0 ? riesz_class_sum(n, n, explicit_max, h, sigma) : riesz_class_sum(d, n, explicit_max, h, sigma);
      const double neg = riesz_class_sum(n - d, n, explicit_max, h, sigma);
      table[d] = d == 0 ? 2.0 * pos : pos + neg;
    }
    // Same-cell self term stays out: only the periodic images of cell i enter W[0].
    return KernelWeights(grid, true, true, std::move(table), {}, 1e-13);
  }
  std::vector<double> table(2 * n - 1);
  for (std::size_t k = 0; k < table.size(); ++k) {
    const auto d = static_cast<std::ptrdiff_t>(k) - static_cast<std::ptrdiff_t>(n - 1);
    table[k] = riesz_line_weight(static_cast<std::size_t>(std::abs(d)), h, sigma);
  }
  std::vector<double> exterior(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double right = static_cast<double>(n - 1 - i) * h;
    const double left = static_cast<double>(i) * h;
    exterior[i] = riesz_exterior(right, h, sigma) + riesz_exterior(left, h, sigma);
  }
  return KernelWeights(grid, false, true, std::move(table), std::move(exterior), 1e-13);
}

double heat_kernel_direct(double z, double t, double tail_tolerance) {
  require_time(t);
  z = std::remainder(z, 2.0 * kPi);
  const double cut = -std::log(tail_tolerance) + 8.0;
  const int k_max = static_cast<int>(std::ceil(std::sqrt(cut / t) / (2.0 * kPi))) + 1;
  double sum = std::exp(-z * z * t);
  for (int k = 1; k <= k_max; ++k) {
    const double a = z + 2.0 * kPi * k;
    const double b = z - 2.0 * kPi * k;
    sum += std::exp(-a * a * t) + std::exp(-b * b * t);
  }
  return sum;
}

double heat_kernel_theta(double z, double t, double tail_tolerance) {
  require_time(t);
  const double cut = -std::log(tail_tolerance) + 8.0;
  const int m_max = static_cast<int>(std::ceil(2.0 * std::sqrt(t * cut))) + 1;
  double sum = 0.0;
  for (int m = m_max; m >= 1; --m) sum += std::exp(-static_cast<double>(m) * m / (4.0 * t)) * std::cos(m * z);
  return (1.0 + 2.0 * sum) / (2.0 * std::sqrt(kPi * t));
}

double heat_kernel_periodic(double z, const HeatKernelParams& params) {
  require_time(params.t);
  if (params.t >= kHeatSwitchTime) return heat_kernel_direct(z, params.t, params.tail_tolerance);
  return heat_kernel_theta(z, params.t, params.tail_tolerance);
}

bool heat_kernel_decreasing(double t, std::size_t samples) {
  require_time(t);
  for (std::size_t k = 1; k <= samples; ++k) {
    const double z = kPi * static_cast<double>(k) / static_cast<double>(samples + 1);
    double d = 0.0;
    if (t < kHeatSwitchTime) {
      // -g'(z) scaled by 2 sqrt(pi t) exp(1/(4t)) / 2.
      const int m_max = static_cast<int>(std::ceil(2.0 * std::sqrt(t * 45.0))) + 2;
      for (int m = m_max; m >= 1; --m)
        d += m * std::exp(-(static_cast<double>(m) * m - 1.0) / (4.0 * t)) * std::sin(m * z);
    } else {
      // -g'(z) scaled by exp(z^2 t) / (2t).
      const int k_max = image_count(t, 2.0 * kPi);
      for (int j = -k_max; j <= k_max; ++j) {
        const double a = z + 2.0 * kPi * j;
        d += a * std::exp(-4.0 * kPi * j * (z + kPi * j) * t);
      }
    }
    if (!(d > 0.0)) return false;
  }
  return true;
}

KernelWeights heat_weights_periodic(const Grid1D& grid, const HeatKernel& kernel) {
  require_time(kernel.t);
  if (!grid.is_periodic()) throw Error(Errc::NotPeriodic, "heat weights live on the circle");
  const double t = kernel.t;
  const std::size_t n = grid.size();
  const double h = grid.width();
  std::vector<double> table(n);
  if (t >= kHeatSwitchTime) {
    const int k_max = image_count(t, 2.0 * kPi);
    for (std::size_t d = 0; d < n; ++d) {
      const double c = static_cast<double>(d) * h - kernel.shift;
      double sum = 0.0;
      for (int k = -k_max; k <= k_max; ++k) sum += gauss_line_weight(c + 2.0 * kPi * k, h, t);
      table[d] = sum;
    }
  } else {
    const int m_max = static_cast<int>(std::ceil(2.0 * std::sqrt(t * 45.0))) + 1;
    for (std::size_t d = 0; d < n; ++d) {
      const double c = static_cast<double>(d) * h - kernel.shift;
      double sum = 0.0;
      for (int m = m_max; m >= 1; --m) {
        const double s = std::sin(0.5 * m * h);
        sum += 2.0 * std::exp(-static_cast<double>(m) * m / (4.0 * t)) * (4.0 * s * s / (static_cast<double>(m) * m)) *
               std::cos(m * c);
      }
      table[d] = std::max(0.0, (h * h + sum) / (2.0 * std::sqrt(kPi * t)));
    }
  }
  return KernelWeights(grid, true, false, std::move(table), {}, 1e-13);
}

KernelWeights heat_weights_periodic(const Grid1D& grid, double t) { return heat_weights_periodic(grid, HeatKernel{t, 0.0}); }

KernelWeights gaussian_weights_interval(const Grid1D& grid, double t) {
  require_time(t);
  if (grid.is_periodic()) throw Error(Errc::InvalidParameter, "Gaussian line weights need an interval grid");
  const std::size_t n = grid.size();
  const double h = grid.width();
  std::vector<double> table(2 * n - 1);
  for (std::size_t k = 0; k < table.size(); ++k) {
    const double d = static_cast<double>(k) - static_cast<double>(n - 1);
    table[k] = gauss_line_weight(d * h, h, t);
  }
  std::vector<double> exterior(n);
  for (std::size_t i = 0; i < n; ++i)
    exterior[i] = gauss_exterior(static_cast<double>(n - 1 - i) * h, h, t) + gauss_exterior(static_cast<double>(i) * h, h, t);
  return KernelWeights(grid, false, false, std::move(table), std::move(exterior), 1e-13);
}

KernelWeights weights_for(const KernelSpec& spec, const Grid1D& grid) {
  if (const auto* heat = std::get_if<HeatKernel>(&spec)) return heat_weights_periodic(grid, *heat);
  if (const auto* riesz = std::get_if<RieszKernel>(&spec)) return riesz_weights_1d(grid, riesz->sigma, grid.is_periodic());
  return gaussian_weights_interval(grid, std::get<GaussianKernel>(spec).t);
}

bool check_kernel_monotone(const KernelWeights& weights) {
  const auto table = weights.table();
  const std::size_t n = weights.grid().size();
  const double scale = *std::max_element(table.begin(), table.end());
  const std::size_t start = weights.singular() ? 1 : 0;
  if (weights.periodized()) {
    for (std::size_t d = 1; d < n; ++d)
      if (std::abs(table[d] - table[n - d]) > 1e-12 * scale) return false;
    for (std::size_t d = start; d < n / 2; ++d)
      if (!(table[d] > table[d + 1])) return false;
    return true;
  }
  for (std::size_t d = 1; d < n; ++d)
    if (std::abs(table[n - 1 + d] - table[n - 1 - d]) > 1e-12 * scale) return false;
  for (std::size_t d = start; d + 1 < n; ++d)
    if (!(table[n - 1 + d] > table[n + d])) return false;
  return true;
}

double LaplaceRule::node(std::size_t k) const { return std::exp(s_lo + step * static_cast<double>(k)); }

double LaplaceRule::apply(double z) const {
  std::vector<double> terms(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double s = s_lo + step * static_cast<double>(k);
    terms[k] = std::exp(lambda * s - z * std::exp(s));
  }
  return step * pairwise_sum(terms);
}

LaplaceRule laplace_quadrature(const LaplaceConfig& cfg) {
  if (!(cfg.lambda > 0.0)) throw Error(Errc::InvalidParameter, "lambda must be positive");
  if (!(cfg.z_min > 0.0) || !(cfg.z_max >= cfg.z_min) || !std::isfinite(cfg.z_max))
    throw Error(Errc::InvalidParameter, "z-range must satisfy 0 < z_min <= z_max");
  if (!(cfg.tolerance > 0.0)) throw Error(Errc::InvalidParameter, "tolerance must be positive");
  const double lam = cfg.lambda;
  const double eps = 0.01 * cfg.tolerance;
  const double gam = std::tgamma(lam);
  // Left window: int_{-inf}^{s} e^{lam s} ds <= eps Gamma(lam) z_max^{-lam}.
  const double s_lo = (std::log(eps * lam * gam) - lam * std::log(cfg.z_max)) / lam;
  // Right window: upper incomplete gamma fraction below eps at z_min.
  double x = std::max(lam, 1.0);
  while (boost::math::gamma_q(lam, x) > eps) x *= 1.25;
  const double s_hi = std::log(x / cfg.z_min);

  std::vector<double> probes;
  const int n_probe = 65;
  const double lz0 = std::log(cfg.z_min);
  const double lz1 = std::log(cfg.z_max);
  for (int k = 0; k < n_probe; ++k) probes.push_back(std::exp(lz0 + (lz1 - lz0) * k / (n_probe - 1)));

  for (double step = 0.5;; step *= 0.5) {
    const auto count = static_cast<std::size_t>(std::ceil((s_hi - s_lo) / step)) + 1;
    if (count > cfg.max_nodes)
      throw Error(Errc::RangeTooWide, "Laplace rule needs more than " + std::to_string(cfg.max_nodes) + " nodes");
    LaplaceRule rule{lam, step, s_lo, count, cfg.z_min, cfg.z_max};
    bool ok = true;
    for (double z : probes) {
      const double exact = gam * std::pow(z, -lam);
      if (std::abs(rule.apply(z) - exact) > cfg.tolerance * exact) {
        ok = false;
        break;
      }
    }
    if (ok) return rule;
  }
}

}  // namespace polya
