#include "polya/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "polya/special.hpp"

namespace polya {

ConvexJ::ConvexJ(std::string name, Fn value, Fn derivative, Fn right_derivative, Flags flags,
                 std::vector<double> breakpoints)
    : name_(std::move(name)),
      value_(std::move(value)),
      derivative_(std::move(derivative)),
      right_derivative_(std::move(right_derivative)),
      flags_(flags),
      breakpoints_(std::move(breakpoints)) {}

ConvexJ ConvexJ::mirrored() const {
  Flags f = flags_;
  f.minimizer = -f.minimizer;
  std::vector<double> bp;
  for (auto it = breakpoints_.rbegin(); it != breakpoints_.rend(); ++it) bp.push_back(-*it);
  auto v = value_;
  auto dl = derivative_;
  auto dr = right_derivative_;
  return ConvexJ(
      name_ + "(-t)", [v](double t) { return v(-t); }, [dr](double t) { return -dr(-t); },
      [dl](double t) { return -dl(-t); }, f, std::move(bp));
}

namespace {

double sign_pow(double t, double p) { return std::copysign(std::pow(std::abs(t), p), t); }

ConvexJ shifted_power_j(std::string name, double p, double t0) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw Error(Errc::InvalidParameter, "power cost needs p >= 1");
  ConvexJ::Flags f{p > 1.0, true, t0, p};
  if (p == 1.0) {
    return ConvexJ(
        std::move(name), [t0](double t) { return std::abs(t - t0); },
        [t0](double t) { return t > t0 ? 1.0 : -1.0; }, [t0](double t) { return t < t0 ? -1.0 : 1.0; }, f, {t0});
  }
  auto d = [p, t0](double t) { return p * sign_pow(t - t0, p - 1.0); };
  return ConvexJ(
      std::move(name), [p, t0](double t) { return std::pow(std::abs(t - t0), p); }, d, d, f, {});
}

}  // namespace

ConvexJ j_library(std::string_view name, const std::vector<double>& params) {
  auto param = [&](std::size_t k, double fallback) { return k < params.size() ? params[k] : fallback; };
  if (name == "abs") return shifted_power_j("abs", 1.0, 0.0);
  if (name == "power") {
    if (params.empty()) throw Error(Errc::InvalidParameter, "power needs an exponent");
    return shifted_power_j("power:" + std::to_string(params[0]), params[0], 0.0);
  }
  if (name == "shifted_power") {
    if (params.size() < 2) throw Error(Errc::InvalidParameter, "shifted_power needs p and t0");
    return shifted_power_j("shifted_power", params[0], params[1]);
  }
  if (name == "one_sided") {
    const double p = param(0, 2.0);
    if (!(p >= 1.0)) throw Error(Errc::InvalidParameter, "one_sided needs p >= 1");
    ConvexJ::Flags f{false, true, 0.0, std::nullopt};
    return ConvexJ(
        "one_sided", [p](double t) { return t > 0.0 ? std::pow(t, p) : 0.0; },
        [p](double t) { return t > 0.0 ? p * std::pow(t, p - 1.0) : 0.0; },
        [p](double t) { return t > 0.0 || (t == 0.0 && p == 1.0) ? p * std::pow(std::max(t, 0.0), p - 1.0) : 0.0; }, f,
        {0.0});
  }
  if (name == "exp_increasing") {
    ConvexJ::Flags f{true, false, 0.0, std::nullopt};
    auto e = [](double t) { return std::exp(t); };
    return ConvexJ("exp_increasing", e, e, e, f, {});
  }
  throw Error(Errc::UnknownName, "unknown cost '" + std::string(name) + "'");
}

ConvexJ parse_j(std::string_view spec) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = spec.find(':', start);
    parts.emplace_back(spec.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  std::vector<double> params;
  for (std::size_t k = 1; k < parts.size(); ++k) {
    try {
      std::size_t used = 0;
      params.push_back(std::stod(parts[k], &used));
      if (used != parts[k].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw Error(Errc::InvalidParameter, "bad cost parameter '" + parts[k] + "'");
    }
  }
  return j_library(parts[0], params);
}

ConvexJ normalize(const ConvexJ& j) {
  if (!j.min_attained()) throw Error(Errc::NotAttained, "inf J is not attained; no normalizing shift exists");
  const double t0 = j.minimizer();
  const double m = j(t0);
  ConvexJ::Flags f = j.flags();
  f.minimizer = 0.0;
  std::vector<double> bp;
  for (double b : j.breakpoints()) bp.push_back(b - t0);
  return ConvexJ(
      j.name(), [j, t0, m](double t) { return j(t + t0) - m; }, [j, t0](double t) { return j.derivative(t + t0); },
      [j, t0](double t) { return j.right_derivative(t + t0); }, f, std::move(bp));
}

std::pair<ConvexJ, ConvexJ> split_plus_minus(const ConvexJ& j) {
  if (!j.min_attained() || j(0.0) != 0.0)
    throw Error(Errc::NotNormalized, "split needs min J = J(0) = 0; normalize first");
  ConvexJ::Flags f = j.flags();
  f.strictly_convex = false;
  f.minimizer = 0.0;
  ConvexJ plus(
      j.name() + "+", [j](double t) { return t >= 0.0 ? j(t) : 0.0; },
      [j](double t) { return t > 0.0 ? j.derivative(t) : 0.0; },
      [j](double t) { return t >= 0.0 ? j.right_derivative(t) : 0.0; }, f, {0.0});
  ConvexJ minus(
      j.name() + "-", [j](double t) { return t < 0.0 ? j(t) : 0.0; },
      [j](double t) { return t <= 0.0 ? j.derivative(t) : 0.0; },
      [j](double t) { return t < 0.0 ? j.right_derivative(t) : 0.0; }, f, {0.0});
  return {plus, minus};
}

namespace {

void require_same_grid(const StepFunction& u, const StepFunction& v, const KernelWeights& w) {
  if (!(u.grid() == v.grid()) || !(u.grid() == w.grid()))
    throw Error(Errc::GridMismatch, "u, v and the weights must share one grid");
}

// True when a singular diagonal meets a nonzero cost: the integral diverges.
bool diagonal_diverges(const StepFunction& u, const StepFunction& v, const ConvexJ& j, const KernelWeights& w) {
  if (!w.singular()) return false;
  for (std::size_t i = 0; i < u.size(); ++i)
    if (j(u[i] - v[i]) != 0.0) return true;
  return false;
}

double pair_sum(const StepFunction& u, const StepFunction& v, const ConvexJ& j, const KernelWeights& w) {
  const std::size_t n = u.size();
  std::vector<double> rows(n);
  std::vector<double> row(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k)
      row[k] = j(u[i] - v[k]) * w(static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(k));
    rows[i] = pairwise_sum(row);
  }
  return pairwise_sum(rows);
}

EnergyResult divergent_result(std::string note) {
  EnergyResult r;
  r.value = std::numeric_limits<double>::infinity();
  r.divergent = true;
  r.note = std::move(note);
  return r;
}

}  // namespace

EnergyResult energy_circle(const StepFunction& u, const StepFunction& v, const ConvexJ& j, const KernelWeights& w) {
  require_same_grid(u, v, w);
  if (!u.grid().is_periodic() || !w.periodized())
    throw Error(Errc::GridMismatch, "circle energy needs periodized weights on a periodic grid");
  if (diagonal_diverges(u, v, j, w)) return divergent_result("singular kernel against a nonzero diagonal cost");
  EnergyResult r;
  r.value = pair_sum(u, v, j, w);
  return r;
}

EnergyResult energy_euclidean(const StepFunction& u, const StepFunction& v, const ConvexJ& j, const KernelWeights& w) {
  require_same_grid(u, v, w);
  if (u.grid().is_periodic() || w.periodized())
    throw Error(Errc::GridMismatch, "Euclidean energy needs line weights on an interval grid");
  if (j(0.0) != 0.0) throw Error(Errc::DivergentTail, "J(0) != 0 makes the exterior integral diverge");
  if (diagonal_diverges(u, v, j, w)) return divergent_result("singular kernel against a nonzero diagonal cost");
  const auto ext = w.exterior();
  std::vector<double> terms;
  terms.push_back(pair_sum(u, v, j, w));
  std::vector<double> outer(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) outer[i] = (j(u[i]) + j(-v[i])) * ext[i];
  terms.push_back(pairwise_sum(outer));
  EnergyResult r;
  r.value = terms[0] + terms[1];
  r.note = "exterior included analytically";
  return r;
}

ABDecomposition ab_decomposition(const StepFunction& u, const StepFunction& v, const ConvexJ& j_plus,
                                 const KernelWeights& w) {
  require_same_grid(u, v, w);
  if (w.singular()) throw Error(Errc::InvalidParameter, "A and B are unbounded for singular kernels");
  if (j_plus(0.0) != 0.0 || j_plus(-1.0) != 0.0 || j_plus.derivative(0.0) != 0.0)
    throw Error(Errc::NotNormalized, "A/B decomposition needs a one-sided J+ vanishing on (-inf, 0]");
  std::set<double> levels{0.0};
  levels.insert(u.values().begin(), u.values().end());
  levels.insert(v.values().begin(), v.values().end());

  const std::size_t n = u.size();
  std::vector<double> rowsum(n);
  for (std::size_t i = 0; i < n; ++i) rowsum[i] = w.row_sum(i);

  ABDecomposition out;
  out.breakpoints.assign(levels.begin(), levels.end());
  std::vector<double> net;
  std::vector<double> av(n);
  std::vector<double> bv(n);
  std::vector<double> am(n);
  std::vector<double> bm(n);
  std::vector<double> row(n);
  for (std::size_t k = 0; k + 1 < out.breakpoints.size(); ++k) {
    const double lo = out.breakpoints[k];
    const double hi = out.breakpoints[k + 1];
    const double mid = 0.5 * (lo + hi);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t q = 0; q < n; ++q)
        row[q] = v[q] > lo ? w(static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(q)) : 0.0;
      const double inside = pairwise_sum(row);
      // int_lo^hi J+'(u_i - tau) dtau, exact through J+ itself.
      const double dj = j_plus(u[i] - lo) - j_plus(u[i] - hi);
      const double dmid = j_plus.derivative(u[i] - mid);
      av[i] = rowsum[i] * dj;
      bv[i] = inside * dj;
      am[i] = rowsum[i] * dmid;
      bm[i] = inside * dmid;
    }
    LevelBand band{lo, hi, pairwise_sum(av), pairwise_sum(bv), pairwise_sum(am), pairwise_sum(bm)};
    net.push_back(band.a_integral - band.b_integral);
    out.bands.push_back(band);
  }
  out.energy = pairwise_sum(net);
  return out;
}

}  // namespace polya
