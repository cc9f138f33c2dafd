#include "polya/seminorm.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <set>
#include <tuple>

#include "polya/special.hpp"

namespace polya {

namespace {

constexpr double kPi = std::numbers::pi;

// t beyond which every Gaussian cell weight except offsets 0 and 1 is below e^{-40}.
constexpr double kTailScale = 40.0;
constexpr double kHeadLog = -60.0;

double jump_pow(double a, double b, double p) { return std::pow(std::abs(a - b), p); }

bool all_zero(std::span<const double> xs) {
  return std::all_of(xs.begin(), xs.end(), [](double x) { return x == 0.0; });
}

SeminormResult divergent(std::string method) {
  SeminormResult r;
  r.value = std::numeric_limits<double>::infinity();
  r.divergent = true;
  r.method = std::move(method);
  return r;
}

// S[d] = sum_i |u_i - u_{i-d}|^p over the circle.
std::vector<double> circle_jumps(std::span<const double> u, double p) {
  const std::size_t n = u.size();
  std::vector<double> s(n, 0.0);
  std::vector<double> terms(n);
  for (std::size_t d = 1; d < n; ++d) {
    for (std::size_t i = 0; i < n; ++i) terms[i] = jump_pow(u[i], u[(i + n - d) % n], p);
    s[d] = pairwise_sum(terms);
  }
  return s;
}

struct Jumps2D {
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  // S[d1][e], e = i2 - j2 + n2 - 1.
  std::vector<double> s;
  // U[i2] = sum_{i1} u(i1, i2)^p.
  std::vector<double> mass;

  double at(std::size_t d1, std::size_t e) const { return s[d1 * (2 * n2 - 1) + e]; }
};

Jumps2D grid_jumps(const GridFunctionND& u, double p) {
  if (u.dimension() != 2) throw Error(Errc::InvalidParameter, "ND seminorms are implemented for n = 2");
  Jumps2D out;
  out.n1 = u.shape().axis(0).size();
  out.n2 = u.shape().axis(1).size();
  const std::size_t n1 = out.n1;
  const std::size_t n2 = out.n2;
  const auto v = u.values();
  const std::size_t cols = 2 * n2 - 1;
  out.s.assign(n1 * cols, 0.0);
  std::vector<std::vector<double>> acc(n1 * cols);
  for (std::size_t d1 = 0; d1 < n1; ++d1)
    for (std::size_t i1 = 0; i1 < n1; ++i1) {
      const std::size_t j1 = (i1 + n1 - d1) % n1;
      for (std::size_t i2 = 0; i2 < n2; ++i2)
        for (std::size_t j2 = 0; j2 < n2; ++j2)
          acc[d1 * cols + i2 + n2 - 1 - j2].push_back(jump_pow(v[i1 * n2 + i2], v[j1 * n2 + j2], p));
    }
  for (std::size_t k = 0; k < acc.size(); ++k) out.s[k] = pairwise_sum(acc[k]);
  out.mass.assign(n2, 0.0);
  std::vector<double> col(n1);
  for (std::size_t i2 = 0; i2 < n2; ++i2) {
    for (std::size_t i1 = 0; i1 < n1; ++i1) col[i1] = std::pow(v[i1 * n2 + i2], p);
    out.mass[i2] = pairwise_sum(col);
  }
  return out;
}

std::shared_ptr<const RieszWeights2D> cached_riesz_2d(const std::vector<Grid1D>& axes, double sigma) {
  using Key = std::tuple<std::size_t, std::size_t, double, double, double>;
  static std::mutex mu;
  static std::map<Key, std::shared_ptr<const RieszWeights2D>> cache;
  const Key key{axes[0].size(), axes[1].size(), axes[1].lo(), axes[1].hi(), sigma};
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto w = std::make_shared<const RieszWeights2D>(riesz_weights_nd(axes, sigma));
  std::lock_guard lock(mu);
  return cache.emplace(key, std::move(w)).first->second;
}

// Polynomial in tau = t^{-1/2} describing a weight for t beyond the tail scale.
using Poly = std::vector<double>;

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly c(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

void poly_axpy(Poly& y, double a, const Poly& x) {
  if (y.size() < x.size()) y.resize(x.size(), 0.0);
  for (std::size_t k = 0; k < x.size(); ++k) y[k] += a * x[k];
}

// Circle heat weights for large t: W[0] ~ h sqrt(pi) tau - tau^2, W[+-1] ~ tau^2 / 2.
std::vector<Poly> heat_asymptotics(std::size_t n, double h) {
  std::vector<Poly> w(n, Poly(3, 0.0));
  w[0][1] += h * std::sqrt(kPi);
  w[0][2] -= 1.0;
  w[1 % n][2] += 0.5;
  w[(n - 1) % n][2] += 0.5;
  return w;
}

// Line Gaussian weights for large t, indexed by e = d + n - 1.
std::vector<Poly> gauss_asymptotics(std::size_t n, double h) {
  std::vector<Poly> w(2 * n - 1, Poly(3, 0.0));
  w[n - 1][1] = h * std::sqrt(kPi);
  w[n - 1][2] = -1.0;
  if (n > 1) {
    w[n - 2][2] = 0.5;
    w[n][2] = 0.5;
  }
  return w;
}

// Everything the t-integral needs: the integrand at a node and its large-t expansion.
struct LaplaceProblem {
  double lambda = 0.0;
  double head_rate = 0.0;  // f(s) ~ C exp(head_rate s) as s -> -inf
  double t_tail = 0.0;
  double z_min = 0.0;
  double z_max = 0.0;
  std::function<double(double)> energy;  // F(t)
  Poly tail;                             // F(t) ~ sum_k tail[k] t^{-k/2}
};

double laplace_integral(const LaplaceProblem& prob, const LaplaceConfig& cfg, double& tolerance) {
  LaplaceConfig anchor = cfg;
  anchor.lambda = prob.lambda;
  anchor.z_min = prob.z_min;
  anchor.z_max = prob.z_max;
  const LaplaceRule rule = laplace_quadrature(anchor);

  const double lam = prob.lambda;
  const double a = kHeadLog;
  const double b = std::log(prob.t_tail);
  const double step0 = std::min(rule.step, 0.25);
  const auto count = static_cast<std::size_t>(std::ceil((b - a) / step0));
  const double step = (b - a) / static_cast<double>(count);

  std::vector<double> f(count + 1);
  for (std::size_t k = 0; k <= count; ++k) {
    const double s = a + step * static_cast<double>(k);
    f[k] = std::exp(lam * s) * prob.energy(std::exp(s));
  }
  std::vector<double> inner(f.begin() + 1, f.end() - 1);
  const double body_sum = 0.5 * (f.front() + f.back()) + pairwise_sum(inner);

  // Endpoint derivatives from the analytic forms on either side.
  const double beta = prob.head_rate;
  const double fa1 = beta * f.front();
  const double fa3 = beta * beta * beta * f.front();
  double fb1 = 0.0;
  double fb3 = 0.0;
  double tail = 0.0;
  double scale = 0.0;
  for (double c : prob.tail) scale = std::max(scale, std::abs(c));
  for (std::size_t k = 0; k < prob.tail.size(); ++k) {
    const double c = prob.tail[k];
    if (c == 0.0) continue;
    const double rate = lam - 0.5 * static_cast<double>(k);
    const double fk = c * std::exp(rate * b);
    fb1 += rate * fk;
    fb3 += rate * rate * rate * fk;
    if (rate >= 0.0) {
      if (std::abs(c) > 1e-10 * scale) throw Error(Errc::RangeTooWide, "t-integral does not converge at infinity");
      continue;
    }
    tail += fk / (-rate);
  }
  const double body = step * body_sum - step * step / 12.0 * (fb1 - fa1) + std::pow(step, 4) / 720.0 * (fb3 - fa3);
  const double head = f.front() / beta;
  tolerance = std::max(cfg.tolerance, 1e-9);
  return (head + body + tail) / std::tgamma(lam);
}

SeminormResult finish(double sum, const SeminormParams& params, std::string method, double tol) {
  SeminormResult r;
  r.value = std::pow(std::max(sum, 0.0), 1.0 / params.p);
  r.method = std::move(method);
  r.tolerance = tol;
  return r;
}

void require_indicator(std::span<const double> xs) {
  for (double x : xs)
    if (x != 0.0 && x != 1.0) throw Error(Errc::NotIndicator, "set indicators take values in {0, 1}");
}

}  // namespace

void validate(const SeminormParams& params) {
  if (!(params.s > 0.0 && params.s < 1.0)) throw Error(Errc::InvalidParameter, "s must lie in (0, 1)");
  if (!(params.p >= 1.0) || !std::isfinite(params.p)) throw Error(Errc::InvalidParameter, "p must be >= 1");
}

SeminormResult gagliardo_periodic_direct(const StepFunction& u, const SeminormParams& params,
                                         const KernelWeights& riesz) {
  validate(params);
  if (!riesz.periodized() || !(riesz.grid() == u.grid()))
    throw Error(Errc::GridMismatch, "periodized weights on the grid of u are required");
  const auto s = circle_jumps(u.values(), params.p);
  std::vector<double> terms(s.size());
  for (std::size_t d = 0; d < s.size(); ++d) terms[d] = s[d] * riesz(static_cast<std::ptrdiff_t>(d));
  return finish(pairwise_sum(terms), params, "direct", riesz.accuracy());
}

SeminormResult gagliardo_periodic_direct(const StepFunction& u, const SeminormParams& params) {
  validate(params);
  if (!u.grid().is_periodic()) throw Error(Errc::NotPeriodic, "periodic seminorm needs a periodic grid");
  if (u.is_constant()) return finish(0.0, params, "direct", 0.0);
  if (params.sigma() >= 1.0) return divergent("direct");
  return gagliardo_periodic_direct(u, params, riesz_weights_1d(u.grid(), params.sigma(), true));
}

SeminormResult gagliardo_periodic_direct(const GridFunctionND& u, const SeminormParams& params,
                                         const RieszWeights2D& riesz) {
  validate(params);
  if (!(riesz.axis1() == u.shape().axis(0)) || !(riesz.axis2() == u.shape().axis(1)))
    throw Error(Errc::GridMismatch, "2D weights must match the axes of u");
  const auto jumps = grid_jumps(u, params.p);
  const std::size_t n2 = jumps.n2;
  std::vector<double> terms;
  terms.reserve(jumps.s.size() + n2);
  for (std::size_t d1 = 0; d1 < jumps.n1; ++d1)
    for (std::size_t e = 0; e < 2 * n2 - 1; ++e)
      terms.push_back(jumps.at(d1, e) * riesz(static_cast<std::ptrdiff_t>(d1),
                                              static_cast<std::ptrdiff_t>(e) - static_cast<std::ptrdiff_t>(n2 - 1)));
  for (std::size_t i2 = 0; i2 < n2; ++i2) terms.push_back(2.0 * jumps.mass[i2] * riesz.exterior(i2));
  return finish(pairwise_sum(terms), params, "direct", riesz.accuracy());
}

SeminormResult gagliardo_periodic_direct(const GridFunctionND& u, const SeminormParams& params) {
  validate(params);
  if (all_zero(u.values())) return finish(0.0, params, "direct", 0.0);
  if (params.sigma() >= 1.0) return divergent("direct");
  const auto w = cached_riesz_2d(u.shape().axes(), params.sigma());
  return gagliardo_periodic_direct(u, params, *w);
}

SeminormResult gagliardo_periodic_laplace(const StepFunction& u, const SeminormParams& params,
                                          const LaplaceConfig& cfg) {
  validate(params);
  if (!u.grid().is_periodic()) throw Error(Errc::NotPeriodic, "periodic seminorm needs a periodic grid");
  if (u.is_constant()) return finish(0.0, params, "laplace", 0.0);
  if (params.sigma() >= 1.0) return divergent("laplace");
  const Grid1D grid = u.grid();
  const double h = grid.width();
  const auto jumps = circle_jumps(u.values(), params.p);

  LaplaceProblem prob;
  prob.lambda = params.lambda(1);
  prob.head_rate = prob.lambda - 0.5;
  prob.t_tail = kTailScale / (h * h);
  prob.z_min = h * h;
  prob.z_max = 4.0 * kPi * kPi;
  prob.energy = [&](double t) {
    const auto w = heat_weights_periodic(grid, t);
    std::vector<double> terms(jumps.size());
    for (std::size_t d = 0; d < jumps.size(); ++d) terms[d] = jumps[d] * w(static_cast<std::ptrdiff_t>(d));
    return pairwise_sum(terms);
  };
  const auto asym = heat_asymptotics(grid.size(), h);
  for (std::size_t d = 0; d < jumps.size(); ++d) poly_axpy(prob.tail, jumps[d], asym[d]);

  double tol = 0.0;
  const double sum = laplace_integral(prob, cfg, tol);
  return finish(sum, params, "laplace", tol);
}

SeminormResult gagliardo_periodic_laplace(const GridFunctionND& u, const SeminormParams& params,
                                          const LaplaceConfig& cfg) {
  validate(params);
  if (u.dimension() != 2) throw Error(Errc::InvalidParameter, "ND seminorms are implemented for n = 2");
  if (all_zero(u.values())) return finish(0.0, params, "laplace", 0.0);
  if (params.sigma() >= 1.0) return divergent("laplace");
  const Grid1D g1 = u.shape().axis(0);
  const Grid1D g2 = u.shape().axis(1);
  const double h1 = g1.width();
  const double h2 = g2.width();
  const std::size_t n2 = g2.size();
  const auto jumps = grid_jumps(u, params.p);

  LaplaceProblem prob;
  prob.lambda = params.lambda(2);
  prob.head_rate = prob.lambda - 1.0;
  const double hmin = std::min(h1, h2);
  prob.t_tail = kTailScale / (hmin * hmin);
  prob.z_min = hmin * hmin;
  prob.z_max = 4.0 * kPi * kPi + g2.length() * g2.length();
  prob.energy = [&](double t) {
    const auto w1 = heat_weights_periodic(g1, t);
    const auto w2 = gaussian_weights_interval(g2, t);
    std::vector<double> terms;
    terms.reserve(jumps.s.size() + n2);
    for (std::size_t d1 = 0; d1 < jumps.n1; ++d1) {
      const double a = w1(static_cast<std::ptrdiff_t>(d1));
      for (std::size_t e = 0; e < 2 * n2 - 1; ++e) terms.push_back(jumps.at(d1, e) * a * w2.table()[e]);
    }
    const double line_mass = h1 * std::sqrt(kPi / t);
    for (std::size_t i2 = 0; i2 < n2; ++i2) terms.push_back(2.0 * jumps.mass[i2] * line_mass * w2.exterior()[i2]);
    return pairwise_sum(terms);
  };
  const auto a1 = heat_asymptotics(g1.size(), h1);
  const auto a2 = gauss_asymptotics(n2, h2);
  for (std::size_t d1 = 0; d1 < jumps.n1; ++d1)
    for (std::size_t e = 0; e < 2 * n2 - 1; ++e) poly_axpy(prob.tail, jumps.at(d1, e), poly_mul(a1[d1], a2[e]));
  // Boundary rows see half a Gaussian tail per open side: exterior ~ tau^2 / 2 each.
  for (std::size_t i2 = 0; i2 < n2; ++i2) {
    const double sides = (i2 == 0 ? 1.0 : 0.0) + (i2 + 1 == n2 ? 1.0 : 0.0);
    if (sides == 0.0) continue;
    Poly ext{0.0, 0.0, 0.0, 2.0 * jumps.mass[i2] * h1 * std::sqrt(kPi) * 0.5 * sides};
    poly_axpy(prob.tail, 1.0, ext);
  }

  double tol = 0.0;
  const double sum = laplace_integral(prob, cfg, tol);
  return finish(sum, params, "laplace", tol);
}

double fractional_perimeter(const StepFunction& indicator, const KernelWeights& riesz) {
  require_indicator(indicator.values());
  if (!riesz.periodized() || !(riesz.grid() == indicator.grid()))
    throw Error(Errc::GridMismatch, "periodized weights on the grid of E are required");
  const std::size_t n = indicator.size();
  std::vector<double> terms;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (indicator[i] == 1.0 && indicator[j] == 0.0)
        terms.push_back(riesz(static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(j)));
  return pairwise_sum(terms);
}

double fractional_perimeter(const StepFunction& indicator, double s) {
  require_indicator(indicator.values());
  if (!indicator.grid().is_periodic()) throw Error(Errc::NotPeriodic, "periodic perimeter needs a periodic grid");
  if (!(s > 0.0 && s < 1.0)) throw Error(Errc::InvalidParameter, "s must lie in (0, 1)");
  if (indicator.is_constant()) return 0.0;
  return fractional_perimeter(indicator, riesz_weights_1d(indicator.grid(), s, true));
}

double fractional_perimeter(const GridFunctionND& indicator, double s) {
  require_indicator(indicator.values());
  if (indicator.dimension() != 2) throw Error(Errc::InvalidParameter, "ND perimeter is implemented for n = 2");
  if (!(s > 0.0 && s < 1.0)) throw Error(Errc::InvalidParameter, "s must lie in (0, 1)");
  if (all_zero(indicator.values())) return 0.0;
  const auto w = cached_riesz_2d(indicator.shape().axes(), s);
  const std::size_t n1 = indicator.shape().axis(0).size();
  const std::size_t n2 = indicator.shape().axis(1).size();
  const auto v = indicator.values();
  std::vector<double> terms;
  for (std::size_t i = 0; i < n1 * n2; ++i) {
    if (v[i] != 1.0) continue;
    const auto i1 = static_cast<std::ptrdiff_t>(i / n2);
    const auto i2 = static_cast<std::ptrdiff_t>(i % n2);
    terms.push_back(w->exterior(static_cast<std::size_t>(i2)));
    for (std::size_t j = 0; j < n1 * n2; ++j) {
      if (v[j] != 0.0) continue;
      const auto j1 = static_cast<std::ptrdiff_t>(j / n2);
      const auto j2 = static_cast<std::ptrdiff_t>(j % n2);
      terms.push_back((*w)(i1 - j1, i2 - j2));
    }
  }
  return pairwise_sum(terms);
}

CoareaCheck coarea_identity_check(const StepFunction& u, const KernelWeights& riesz) {
  const SeminormParams unit{0.5, 1.0};
  CoareaCheck out;
  out.lhs = gagliardo_periodic_direct(u, unit, riesz).value;
  std::set<double> levels{0.0};
  levels.insert(u.values().begin(), u.values().end());
  const std::vector<double> tau(levels.begin(), levels.end());
  std::vector<double> terms;
  std::vector<double> chi(u.size());
  for (std::size_t k = 0; k + 1 < tau.size(); ++k) {
    for (std::size_t i = 0; i < u.size(); ++i) chi[i] = u[i] > tau[k] ? 1.0 : 0.0;
    const StepFunction set(u.grid(), chi);
    terms.push_back(2.0 * (tau[k + 1] - tau[k]) * fractional_perimeter(set, riesz));
  }
  out.rhs = pairwise_sum(terms);
  const double diff = std::abs(out.lhs - out.rhs);
  out.residual = out.lhs > 0.0 ? diff / out.lhs : diff;
  return out;
}

CoareaCheck coarea_identity_check(const StepFunction& u, double s) {
  if (!(s > 0.0 && s < 1.0)) throw Error(Errc::InvalidParameter, "s must lie in (0, 1)");
  return coarea_identity_check(u, riesz_weights_1d(u.grid(), s, true));
}

}  // namespace polya
