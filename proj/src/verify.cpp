#include "polya/verify.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "polya/rearrange.hpp"
#include "polya/special.hpp"

namespace polya {

namespace {

constexpr double kZeroTol = 1e-12;
constexpr double kIndeterminate = 1e-8;

std::vector<double> refined_values(const StepFunction& u) {
  const auto r = refine(u, 2);
  return {r.values().begin(), r.values().end()};
}

std::vector<double> to_vec(std::span<const double> xs) { return {xs.begin(), xs.end()}; }

double bilinear(const StepFunction& a, const KernelWeights& w, const StepFunction& b) {
  const std::size_t n = a.size();
  std::vector<double> rows(n);
  std::vector<double> row(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j)
      row[j] = a[i] * w(static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(j)) * b[j];
    rows[i] = pairwise_sum(row);
  }
  return pairwise_sum(rows);
}

const HeatKernel& require_heat(const KernelSpec& g) {
  const auto* heat = std::get_if<HeatKernel>(&g);
  if (!heat) throw Error(Errc::InvalidParameter, "circle checks use the periodic heat family");
  return *heat;
}

void require_pair(const StepFunction& u, const StepFunction& v) {
  if (!(u.grid() == v.grid())) throw Error(Errc::GridMismatch, "u and v must share one grid");
}

// Shifts s with a[i] == b[i + s] (cyclic) over all i.
std::vector<std::ptrdiff_t> cyclic_shifts(std::span<const double> a, std::span<const double> b) {
  std::vector<std::ptrdiff_t> out;
  const std::size_t n = a.size();
  for (std::size_t s = 0; s < n; ++s) {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) ok = a[i] == b[(i + s) % n];
    if (ok) out.push_back(static_cast<std::ptrdiff_t>(s));
  }
  return out;
}

// Shifts s with a[i] == b[i + s], reading zero outside b.
std::vector<std::ptrdiff_t> linear_shifts(std::span<const double> a, std::span<const double> b) {
  std::vector<std::ptrdiff_t> out;
  const auto n = static_cast<std::ptrdiff_t>(a.size());
  for (std::ptrdiff_t s = -n + 1; s < n; ++s) {
    bool ok = true;
    for (std::ptrdiff_t i = 0; i < n && ok; ++i) {
      const std::ptrdiff_t k = i + s;
      const double bv = (k >= 0 && k < n) ? b[static_cast<std::size_t>(k)] : 0.0;
      ok = a[static_cast<std::size_t>(i)] == bv;
    }
    if (ok) out.push_back(s);
  }
  return out;
}

std::vector<std::ptrdiff_t> intersect(const std::vector<std::ptrdiff_t>& a, const std::vector<std::ptrdiff_t>& b) {
  std::vector<std::ptrdiff_t> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<double> level_set(std::span<const double> xs, double tau) {
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = xs[i] > tau ? 1.0 : 0.0;
  return out;
}

bool is_abs_cost(const ConvexJ& j) { return j.power() && *j.power() == 1.0 && j.minimizer() == 0.0; }

bool all_zero(std::span<const double> xs) {
  return std::all_of(xs.begin(), xs.end(), [](double x) { return x == 0.0; });
}

// Representative levels strictly between consecutive distinct values inside (lo, hi).
std::vector<double> band_levels(std::span<const double> a, std::span<const double> b, double lo, double hi) {
  std::set<double> vals(a.begin(), a.end());
  vals.insert(b.begin(), b.end());
  vals.insert(lo);
  vals.insert(hi);
  const std::vector<double> v(vals.begin(), vals.end());
  std::vector<double> out;
  for (std::size_t k = 0; k + 1 < v.size(); ++k) {
    const double mid = 0.5 * (v[k] + v[k + 1]);
    if (mid > lo && mid < hi) out.push_back(mid);
  }
  return out;
}

using ShiftFinder = std::vector<std::ptrdiff_t> (*)(std::span<const double>, std::span<const double>);

// Levelwise common translates of superlevel sets; fills the per-level shifts on success.
bool levelwise(std::span<const double> ua, std::span<const double> us, std::span<const double> va,
               std::span<const double> vs, const std::vector<double>& taus, ShiftFinder find,
               std::vector<std::ptrdiff_t>& shifts) {
  shifts.clear();
  for (double tau : taus) {
    const auto a = level_set(ua, tau);
    const auto as = level_set(us, tau);
    const auto b = level_set(va, tau);
    const auto bs = level_set(vs, tau);
    const auto common = intersect(find(a, as), find(b, bs));
    if (common.empty()) return false;
    shifts.push_back(common.front());
  }
  return true;
}

}  // namespace

std::string to_string(const EqualityClass& c) {
  switch (c.tag) {
    case EqualityTag::ConstantCase: return "ConstantCase";
    case EqualityTag::ZeroCase: return "ZeroCase";
    case EqualityTag::Neither: return "Neither";
    case EqualityTag::CommonTranslate: return "CommonTranslate(" + std::to_string(c.shift) + ")";
    case EqualityTag::LevelwiseTranslate: {
      std::string s = "LevelwiseTranslate(";
      for (std::size_t k = 0; k < c.level_shifts.size(); ++k) s += (k ? ";" : "") + std::to_string(c.level_shifts[k]);
      return s + ")";
    }
  }
  return "Neither";
}

double check_riesz_circle(const StepFunction& f, const StepFunction& h, const KernelSpec& g) {
  require_pair(f, h);
  require_heat(g);
  if (!f.grid().is_periodic()) throw Error(Errc::NotPeriodic, "circle inequality needs a periodic grid");
  const Grid1D fine = f.grid().refined(2);
  const auto w = weights_for(g, fine);
  const auto ws = weights_for(symmetrized(g), fine);
  const double lhs = bilinear(refine(f, 2), w, refine(h, 2));
  const double rhs = bilinear(periodic_rearrange_1d(f), ws, periodic_rearrange_1d(h));
  return rhs - lhs;
}

double check_nonexpansivity_circle(const StepFunction& u, const StepFunction& v, const ConvexJ& j,
                                   const KernelSpec& g) {
  require_pair(u, v);
  require_heat(g);
  if (!u.grid().is_periodic()) throw Error(Errc::NotPeriodic, "circle inequality needs a periodic grid");
  const Grid1D fine = u.grid().refined(2);
  const auto w = weights_for(g, fine);
  const auto ws = weights_for(symmetrized(g), fine);
  const double lhs = energy_circle(refine(u, 2), refine(v, 2), j, w).value;
  const double rhs = energy_circle(periodic_rearrange_1d(u), periodic_rearrange_1d(v), j, ws).value;
  return lhs - rhs;
}

double ab_consistency(const StepFunction& u, const StepFunction& v, const ConvexJ& j, const KernelSpec& g) {
  require_pair(u, v);
  require_heat(g);
  const auto [jp, jm] = split_plus_minus(j);
  const Grid1D fine = u.grid().refined(2);
  const auto w = weights_for(g, fine);
  const auto ws = weights_for(symmetrized(g), fine);
  const auto plain = ab_decomposition(refine(u, 2), refine(v, 2), jp, w);
  const auto rearr = ab_decomposition(periodic_rearrange_1d(u), periodic_rearrange_1d(v), jp, ws);
  if (plain.bands.size() != rearr.bands.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (std::size_t k = 0; k < plain.bands.size(); ++k) {
    const auto& a = plain.bands[k];
    const auto& b = rearr.bands[k];
    const double scale = std::max({1.0, std::abs(a.a_integral), std::abs(b.a_integral)});
    worst = std::max(worst, std::abs(a.a_integral - b.a_integral) / scale);
    worst = std::max(worst, std::abs(a.a_mid - b.a_mid) / std::max({1.0, std::abs(a.a_mid)}));
    worst = std::max(worst, (a.b_integral - b.b_integral) / scale);
    worst = std::max(worst, (a.b_mid - b.b_mid) / std::max({1.0, std::abs(a.a_mid)}));
    worst = std::max(worst, (b.b_integral - b.a_integral) / scale);
  }
  return worst;
}

double check_nonexpansivity_euclidean(const StepFunction& u, const StepFunction& v, const ConvexJ& j,
                                      const GaussianKernel& g) {
  require_pair(u, v);
  if (j(0.0) != 0.0) throw Error(Errc::NotNormalized, "Euclidean nonexpansivity needs J(0) = 0");
  if (u.grid().is_periodic()) throw Error(Errc::InvalidParameter, "Euclidean inequality needs an interval grid");
  const Grid1D fine = u.grid().refined(2);
  const auto w = gaussian_weights_interval(fine, g.t);
  const double lhs = energy_euclidean(refine(u, 2), refine(v, 2), j, w).value;
  const double rhs = energy_euclidean(symmetric_decreasing_1d(u), symmetric_decreasing_1d(v), j, w).value;
  return lhs - rhs;
}

GridFunctionND refine_axis(const GridFunctionND& u, std::size_t axis, std::size_t factor) {
  const auto& shape = u.shape();
  auto axes = shape.axes();
  axes.at(axis) = axes[axis].refined(factor);
  const TensorGrid fine(axes);
  std::vector<double> out(fine.size());
  for (std::size_t f = 0; f < fine.size(); ++f) {
    auto idx = fine.unflat(f);
    idx[axis] /= factor;
    out[f] = u.values()[shape.flat(idx)];
  }
  return GridFunctionND(std::move(axes), std::move(out));
}

namespace {

template <class F>
PolyaMargin polya_margin(const F& plain, const F& rearranged, const SeminormParams& params, bool with_laplace) {
  PolyaMargin m;
  const auto a = gagliardo_periodic_direct(plain, params);
  const auto b = gagliardo_periodic_direct(rearranged, params);
  if (a.divergent || b.divergent) {
    m.divergent = true;
    m.direct = a.divergent && b.divergent ? 0.0 : (a.divergent ? std::numeric_limits<double>::infinity() : -1.0);
    return m;
  }
  m.direct = a.value - b.value;
  m.scale = a.value;
  if (with_laplace) {
    m.has_laplace = true;
    m.laplace = gagliardo_periodic_laplace(plain, params).value - gagliardo_periodic_laplace(rearranged, params).value;
  }
  return m;
}

}  // namespace

PolyaMargin check_polya_periodic(const StepFunction& u, const SeminormParams& params, bool with_laplace) {
  return polya_margin(refine(u, 2), periodic_rearrange_1d(u), params, with_laplace);
}

PolyaMargin check_polya_periodic(const GridFunctionND& u, const SeminormParams& params, bool with_laplace) {
  return polya_margin(refine_axis(u, 0, 2), periodic_rearrange_nd(u), params, with_laplace);
}

PolyaMargin check_polya_cylindrical(const GridFunctionND& u, const SeminormParams& params, bool with_laplace) {
  if (u.dimension() != 2) throw Error(Errc::InvalidParameter, "exact cylindrical checks need n = 2");
  return polya_margin(refine_axis(u, 1, 2), cylindrical_rearrange(u), params, with_laplace);
}

EqualityClass classify_equality(const StepFunction& u, const StepFunction& v, EqualityContext context,
                                const ConvexJ& j) {
  EqualityClass out;
  const bool abs_cost = is_abs_cost(j);
  if (context == EqualityContext::CylindricalPS)
    throw Error(Errc::InvalidParameter, "cylindrical classification needs a GridFunctionND");

  if (context == EqualityContext::PeriodicPS) {
    if (!u.grid().is_periodic()) throw Error(Errc::NotPeriodic, "periodic classification needs a periodic grid");
    if (u.is_constant()) return {EqualityTag::ConstantCase, 0, {}};
    const auto a = refined_values(u);
    const auto s = to_vec(periodic_rearrange_1d(u).values());
    if (const auto sh = cyclic_shifts(a, s); !sh.empty()) return {EqualityTag::CommonTranslate, sh.front(), {}};
    if (abs_cost && levelwise(a, s, a, s, band_levels(a, a, u.min(), u.max()), cyclic_shifts, out.level_shifts)) {
      out.tag = EqualityTag::LevelwiseTranslate;
      return out;
    }
    return out;
  }

  require_pair(u, v);
  const auto ua = refined_values(u);
  const auto va = refined_values(v);
  if (context == EqualityContext::Circle) {
    if (u.is_constant() || v.is_constant()) return {EqualityTag::ConstantCase, 0, {}};
    const auto us = to_vec(periodic_rearrange_1d(u).values());
    const auto vs = to_vec(periodic_rearrange_1d(v).values());
    if (const auto c = intersect(cyclic_shifts(ua, us), cyclic_shifts(va, vs)); !c.empty())
      return {EqualityTag::CommonTranslate, c.front(), {}};
    if (abs_cost) {
      const auto taus = band_levels(ua, va, std::max(u.min(), v.min()), std::min(u.max(), v.max()));
      if (levelwise(ua, us, va, vs, taus, cyclic_shifts, out.level_shifts)) out.tag = EqualityTag::LevelwiseTranslate;
    }
    return out;
  }

  // Euclidean.
  if (all_zero(u.values()) || all_zero(v.values())) return {EqualityTag::ZeroCase, 0, {}};
  const auto us = to_vec(symmetric_decreasing_1d(u).values());
  const auto vs = to_vec(symmetric_decreasing_1d(v).values());
  if (const auto c = intersect(linear_shifts(ua, us), linear_shifts(va, vs)); !c.empty())
    return {EqualityTag::CommonTranslate, c.front(), {}};
  if (abs_cost) {
    const auto taus = band_levels(ua, va, 0.0, std::min(u.max(), v.max()));
    if (levelwise(ua, us, va, vs, taus, linear_shifts, out.level_shifts)) out.tag = EqualityTag::LevelwiseTranslate;
  }
  return out;
}

namespace {

// Whole-function or per-level translates of a rank-2 function along one axis.
std::vector<std::ptrdiff_t> axis_shifts(std::span<const double> a, std::span<const double> b, std::size_t n1,
                                        std::size_t n2, std::size_t axis) {
  std::vector<std::ptrdiff_t> common;
  bool first = true;
  const std::size_t lines = axis == 0 ? n2 : n1;
  const std::size_t len = axis == 0 ? n1 : n2;
  std::vector<double> la(len);
  std::vector<double> lb(len);
  for (std::size_t l = 0; l < lines; ++l) {
    for (std::size_t k = 0; k < len; ++k) {
      const std::size_t f = axis == 0 ? k * n2 + l : l * n2 + k;
      la[k] = a[f];
      lb[k] = b[f];
    }
    const auto sh = axis == 0 ? cyclic_shifts(la, lb) : linear_shifts(la, lb);
    common = first ? sh : intersect(common, sh);
    first = false;
    if (common.empty()) break;
  }
  return common;
}

}  // namespace

EqualityClass classify_equality(const GridFunctionND& u, EqualityContext context, double p) {
  if (u.dimension() != 2) throw Error(Errc::InvalidParameter, "ND classification is implemented for n = 2");
  EqualityClass out;
  std::size_t axis = 0;
  GridFunctionND plain = u;
  GridFunctionND rear = u;
  if (context == EqualityContext::PeriodicPS) {
    plain = refine_axis(u, 0, 2);
    rear = periodic_rearrange_nd(u);
  } else if (context == EqualityContext::CylindricalPS) {
    axis = 1;
    plain = refine_axis(u, 1, 2);
    rear = cylindrical_rearrange(u);
  } else {
    throw Error(Errc::InvalidParameter, "ND classification covers the Polya-Szego contexts");
  }
  const std::size_t n1 = plain.shape().axis(0).size();
  const std::size_t n2 = plain.shape().axis(1).size();
  const auto a = plain.values();
  const auto b = rear.values();
  if (all_zero(a)) return {EqualityTag::ZeroCase, 0, {}};
  if (const auto sh = axis_shifts(a, b, n1, n2, axis); !sh.empty()) return {EqualityTag::CommonTranslate, sh.front(), {}};
  if (p == 1.0) {
    const double hi = *std::max_element(a.begin(), a.end());
    for (double tau : band_levels(a, a, 0.0, hi)) {
      const auto la = level_set(a, tau);
      const auto lb = level_set(b, tau);
      const auto sh = axis_shifts(la, lb, n1, n2, axis);
      if (sh.empty()) {
        out.level_shifts.clear();
        return out;
      }
      out.level_shifts.push_back(sh.front());
    }
    out.tag = EqualityTag::LevelwiseTranslate;
  }
  return out;
}

void VerificationReport::merge(const VerificationReport& other) {
  if (cases == 0) {
    min_margin = other.min_margin;
  } else if (other.cases > 0) {
    min_margin = std::min(min_margin, other.min_margin);
  }
  if (suite.empty()) suite = other.suite;
  else if (other.suite != suite) suite += "+" + other.suite;
  cases += other.cases;
  bound = std::max(bound, other.bound);
  equality_predicted_and_observed += other.equality_predicted_and_observed;
  equality_outside_classes += other.equality_outside_classes;
  predicted_but_strict += other.predicted_but_strict;
  strict_outside_classes += other.strict_outside_classes;
  indeterminate += other.indeterminate;
  records.insert(records.end(), other.records.begin(), other.records.end());
  failures.insert(failures.end(), other.failures.begin(), other.failures.end());
}

namespace {

enum class Completeness { Both, SoundnessOnly };

// Files one margin into the report. `scale` sizes the zero band; `bound` is the relative
// violation allowed; `predicted` is the class the theorem asserts equality for.
void record(VerificationReport& rep, const std::string& case_id, double margin, double scale, double bound,
            const std::string& predicted, bool predicts_equality, Completeness mode, const std::string& reproducer) {
  CaseRecord r{rep.suite, case_id, margin, predicted, "", "pass"};
  const double unit = std::max(1.0, std::abs(scale));
  const bool violation = margin < -bound * unit;
  const bool zero = std::abs(margin) <= std::max(bound, kZeroTol) * unit;
  const bool indeterminate = !zero && margin > 0.0 && margin < kIndeterminate * unit;
  r.class_observed = violation ? "violation" : (zero ? "equality" : (indeterminate ? "indeterminate" : "strict"));
  if (rep.cases == 0) rep.min_margin = margin / unit;
  rep.min_margin = std::min(rep.min_margin, margin / unit);
  ++rep.cases;
  rep.bound = std::max(rep.bound, bound);
  if (violation) {
    r.status = "fail";
    rep.failures.push_back(rep.suite + " " + case_id + ": inequality violated, margin " + std::to_string(margin) +
                           " [" + reproducer + "]");
  } else if (indeterminate) {
    r.status = "indeterminate";
    ++rep.indeterminate;
  } else if (zero && predicts_equality) {
    ++rep.equality_predicted_and_observed;
  } else if (zero) {
    ++rep.equality_outside_classes;
    if (mode == Completeness::Both) {
      r.status = "fail";
      rep.failures.push_back(rep.suite + " " + case_id + ": equality outside the predicted classes [" + reproducer + "]");
    } else {
      r.status = "extra-equality";
    }
  } else if (predicts_equality) {
    ++rep.predicted_but_strict;
    r.status = "fail";
    rep.failures.push_back(rep.suite + " " + case_id + ": predicted equality but margin " + std::to_string(margin) +
                           " [" + reproducer + "]");
  } else {
    ++rep.strict_outside_classes;
  }
  rep.records.push_back(std::move(r));
}

std::string values_id(std::span<const double> xs) {
  std::ostringstream os;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) os << '_';
    os << xs[i];
  }
  return os.str();
}

}  // namespace

VerificationReport exhaustive_oracle_circle(const OracleConfig& cfg, const ConvexJ& j) {
  if (cfg.cells == 0 || cfg.levels < 2) throw Error(Errc::InvalidParameter, "oracle needs cells >= 1 and levels >= 2");
  const double per_function = std::pow(static_cast<double>(cfg.levels), static_cast<double>(cfg.cells));
  if (per_function * per_function > static_cast<double>(cfg.budget))
    throw Error(Errc::BudgetExceeded, "oracle enumeration exceeds its budget");

  const Grid1D grid = Grid1D::periodic(cfg.cells);
  const Grid1D fine = grid.refined(2);
  const KernelSpec g = HeatKernel{cfg.heat_time, 0.0};
  const auto w = weights_for(g, fine);
  if (!check_kernel_monotone(w)) throw Error(Errc::KernelNotMonotone, "oracle kernel is not strictly decreasing");

  const auto count = static_cast<std::size_t>(per_function);
  std::vector<StepFunction> funcs;
  std::vector<StepFunction> fine_funcs;
  std::vector<StepFunction> rearranged;
  funcs.reserve(count);
  for (std::size_t code = 0; code < count; ++code) {
    std::vector<double> vals(cfg.cells);
    std::size_t c = code;
    for (std::size_t i = 0; i < cfg.cells; ++i) {
      vals[i] = static_cast<double>(c % cfg.levels);
      c /= cfg.levels;
    }
    funcs.emplace_back(grid, vals);
    fine_funcs.push_back(refine(funcs.back(), 2));
    rearranged.push_back(periodic_rearrange_1d(funcs.back()));
  }

  VerificationReport rep;
  rep.suite = "exhaustive";
  const bool complete = j.strictly_convex() || is_abs_cost(j);
  char tag[96];
  std::snprintf(tag, sizeof tag, "N%zu-L%zu-t%g-%s", cfg.cells, cfg.levels, cfg.heat_time, j.name().c_str());
  for (std::size_t a = 0; a < count; ++a) {
    for (std::size_t b = 0; b < count; ++b) {
      const double lhs = energy_circle(fine_funcs[a], fine_funcs[b], j, w).value;
      const double rhs = energy_circle(rearranged[a], rearranged[b], j, w).value;
      const auto cls = classify_equality(funcs[a], funcs[b], EqualityContext::Circle, j);
      const std::string id = std::string(tag) + "-u" + values_id(funcs[a].values()) + "-v" + values_id(funcs[b].values());
      record(rep, id, lhs - rhs, lhs, kZeroTol, to_string(cls), cls.tag != EqualityTag::Neither,
             complete ? Completeness::Both : Completeness::SoundnessOnly, "exhaustive pair");
    }
  }
  return rep;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"smoke", "riesz", "nonexp-circle", "nonexp-rn", "polya-per", "polya-cyl",
                                              "exhaustive"};
  return names;
}

namespace {

using Rng = std::mt19937_64;

Rng case_rng(std::uint64_t seed, std::uint64_t suite, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(suite), static_cast<std::uint32_t>(index)};
  return Rng(seq);
}

std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

// Random nonnegative cell values: small integer levels half the time (ties and
// plateaus), continuous otherwise.
std::vector<double> random_values(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  if (pick(rng, 2) == 0) {
    const std::size_t levels = 2 + pick(rng, 3);
    for (auto& x : v) x = static_cast<double>(pick(rng, levels));
  } else {
    for (auto& x : v) x = uniform(rng, 0.0, 3.0);
  }
  return v;
}

StepFunction rolled(const StepFunction& u, std::ptrdiff_t shift) {
  const auto n = static_cast<std::ptrdiff_t>(u.size());
  std::vector<double> out(u.size());
  for (std::ptrdiff_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = u[static_cast<std::size_t>(((i + shift) % n + n) % n)];
  return StepFunction(u.grid(), std::move(out));
}

std::string fmt_case(std::size_t index, const std::string& detail) { return "c" + std::to_string(index) + "-" + detail; }

std::string reproducer(std::uint64_t seed, const std::string& suite, std::size_t index) {
  return "seed " + std::to_string(seed) + " suite " + suite + " case " + std::to_string(index);
}

VerificationReport suite_smoke(const SuiteConfig& cfg) {
  VerificationReport rep;
  rep.suite = "smoke";
  const auto j2 = j_library("power", {2.0});
  std::size_t idx = 0;
  for (std::size_t n : {4u, 8u}) {
    for (double c : {0.0, 1.0, 2.5}) {
      const auto grid = Grid1D::periodic(n);
      const auto u = StepFunction::constant(grid, c);
      const auto v = StepFunction::constant(grid, 2.0 * c + 1.0);
      const KernelSpec g = HeatKernel{0.5, 0.0};
      const auto pm = check_polya_periodic(u, {0.4, 2.0}, true);
      const std::pair<const char*, double> checks[] = {{"riesz-const", check_riesz_circle(u, v, g)},
                                                       {"nonexp-const", check_nonexpansivity_circle(u, v, j2, g)},
                                                       {"polya-const", pm.direct},
                                                       {"polya-const-laplace", pm.laplace}};
      for (const auto& [name, margin] : checks) {
        record(rep, fmt_case(idx, name), margin, 1.0, kZeroTol, "ConstantCase", true, Completeness::Both,
               reproducer(cfg.seed, rep.suite, idx));
        ++idx;
      }
    }
  }
  return rep;
}

VerificationReport suite_riesz(const SuiteConfig& cfg) {
  VerificationReport rep;
  rep.suite = "riesz";
  const auto total = static_cast<std::size_t>(3000 * cfg.scale);
  const auto j2 = j_library("power", {2.0});
  for (std::size_t k = 0; k < total; ++k) {
    auto rng = case_rng(cfg.seed, 1, k);
    const std::size_t n = std::vector<std::size_t>{4, 6, 8, 12}[pick(rng, 4)];
    const double t = std::vector<double>{0.1, 0.5, 2.0}[pick(rng, 3)];
    const bool shifted = pick(rng, 2) == 0;
    const double shift = shifted ? uniform(rng, -std::numbers::pi, std::numbers::pi) : 0.0;
    const auto grid = Grid1D::periodic(n);
    StepFunction f(grid, random_values(rng, n));
    StepFunction h(grid, random_values(rng, n));
    if (!shifted && pick(rng, 8) == 0) {
      // Common translate of the rearrangements: equality class (ii).
      const auto s = static_cast<std::ptrdiff_t>(pick(rng, 2 * n));
      f = rolled(periodic_rearrange_1d(f), s);
      h = rolled(periodic_rearrange_1d(h), s);
    }
    const KernelSpec g = HeatKernel{t, shift};
    const double margin = check_riesz_circle(f, h, g);
    const double scale = bilinear(refine(f, 2), weights_for(g, f.grid().refined(2)), refine(h, 2));
    // A translated kernel keeps only the constant class.
    std::string predicted = "unchecked";
    bool eq = f.is_constant() || h.is_constant();
    if (eq) predicted = "ConstantCase";
    Completeness mode = Completeness::SoundnessOnly;
    if (!shifted) {
      const auto cls = classify_equality(f, h, EqualityContext::Circle, j2);
      predicted = to_string(cls);
      eq = cls.tag != EqualityTag::Neither;
      mode = Completeness::Both;
    }
    record(rep, fmt_case(k, "N" + std::to_string(f.size()) + "-t" + std::to_string(t)), margin, scale, kZeroTol,
           predicted, eq, mode, reproducer(cfg.seed, rep.suite, k));
  }
  return rep;
}

VerificationReport suite_nonexp_circle(const SuiteConfig& cfg) {
  VerificationReport rep;
  rep.suite = "nonexp-circle";
  const std::vector<ConvexJ> costs{j_library("abs"), j_library("power", {2.0}), j_library("power", {4.0}),
                                   j_library("power", {1.5})};
  const auto per_cost = static_cast<std::size_t>(1000 * cfg.scale);
  std::size_t k = 0;
  for (const auto& j : costs) {
    for (std::size_t c = 0; c < per_cost; ++c, ++k) {
      auto rng = case_rng(cfg.seed, 2, k);
      const std::size_t n = std::vector<std::size_t>{4, 6, 8}[pick(rng, 3)];
      const double t = std::vector<double>{0.25, 1.0, 3.0}[pick(rng, 3)];
      const bool shifted = pick(rng, 4) == 0;
      const double shift = shifted ? uniform(rng, -std::numbers::pi, std::numbers::pi) : 0.0;
      const auto grid = Grid1D::periodic(n);
      StepFunction u(grid, random_values(rng, n));
      StepFunction v(grid, random_values(rng, n));
      if (!shifted && pick(rng, 8) == 0) {
        const auto s = static_cast<std::ptrdiff_t>(pick(rng, 2 * n));
        u = rolled(periodic_rearrange_1d(u), s);
        v = rolled(periodic_rearrange_1d(v), s);
      }
      const KernelSpec g = HeatKernel{t, shift};
      const double margin = check_nonexpansivity_circle(u, v, j, g);
      const double scale = energy_circle(refine(u, 2), refine(v, 2), j, weights_for(g, u.grid().refined(2))).value;
      std::string predicted = "unchecked";
      bool eq = u.is_constant() || v.is_constant();
      if (eq) predicted = "ConstantCase";
      Completeness mode = Completeness::SoundnessOnly;
      if (!shifted) {
        const auto cls = classify_equality(u, v, EqualityContext::Circle, j);
        predicted = to_string(cls);
        eq = cls.tag != EqualityTag::Neither;
        mode = Completeness::Both;
      }
      const std::string id = fmt_case(k, j.name() + "-N" + std::to_string(u.size()));
      record(rep, id, margin, scale, kZeroTol, predicted, eq, mode, reproducer(cfg.seed, rep.suite, k));
      if (k % 10 == 0) {
        const double viol = ab_consistency(u, v, j, g);
        if (viol > 1e-10)
          rep.failures.push_back(rep.suite + " " + id + ": A/B consistency violated by " + std::to_string(viol));
      }
    }
  }
  return rep;
}

VerificationReport suite_nonexp_rn(const SuiteConfig& cfg) {
  VerificationReport rep;
  rep.suite = "nonexp-rn";
  const std::vector<ConvexJ> costs{j_library("abs"), j_library("power", {2.0}), j_library("power", {4.0}),
                                   j_library("power", {1.5})};
  const auto total = static_cast<std::size_t>(2000 * cfg.scale);
  for (std::size_t k = 0; k < total; ++k) {
    auto rng = case_rng(cfg.seed, 3, k);
    const auto& j = costs[k % costs.size()];
    const std::size_t n = std::vector<std::size_t>{6, 8, 10}[pick(rng, 3)];
    const double t = std::vector<double>{0.5, 2.0}[pick(rng, 2)];
    const auto grid = Grid1D::interval(n, -3.0, 3.0);
    auto uv = random_values(rng, n);
    auto vv = random_values(rng, n);
    uv.front() = uv.back() = vv.front() = vv.back() = 0.0;
    if (pick(rng, 10) == 0) std::fill(vv.begin(), vv.end(), 0.0);
    const StepFunction u(grid, uv);
    const StepFunction v(grid, vv);
    const double margin = check_nonexpansivity_euclidean(u, v, j, GaussianKernel{t});
    const auto w = gaussian_weights_interval(grid.refined(2), t);
    const double scale = energy_euclidean(refine(u, 2), refine(v, 2), j, w).value;
    const auto cls = classify_equality(u, v, EqualityContext::Euclidean, j);
    record(rep, fmt_case(k, j.name() + "-N" + std::to_string(n)), margin, scale, kZeroTol, to_string(cls),
           cls.tag != EqualityTag::Neither, Completeness::Both, reproducer(cfg.seed, rep.suite, k));
  }
  return rep;
}

struct PolyaPoint {
  double s;
  double p;
};

const std::vector<PolyaPoint>& polya_points() {
  static const std::vector<PolyaPoint> pts{{0.2, 1.0}, {0.3, 2.0}, {0.5, 1.0}, {0.4, 1.5}, {0.2, 4.0}, {0.7, 1.0}};
  return pts;
}

void record_polya(VerificationReport& rep, const std::string& id, const PolyaMargin& m, const EqualityClass& cls,
                  double p, const std::string& repro) {
  const bool eq = cls.tag != EqualityTag::Neither;
  // p = 1 equality beyond levelwise translates is an open question for discontinuous u.
  const Completeness mode = p > 1.0 ? Completeness::Both : Completeness::SoundnessOnly;
  record(rep, id, m.direct, m.scale, kZeroTol, to_string(cls), eq, mode, repro);
  if (m.has_laplace && m.laplace < -1e-8 * std::max(1.0, m.scale))
    rep.failures.push_back(rep.suite + " " + id + ": Laplace-route margin " + std::to_string(m.laplace) + " [" + repro +
                           "]");
}

VerificationReport suite_polya_per(const SuiteConfig& cfg) {
  VerificationReport rep;
  rep.suite = "polya-per";
  const auto total = static_cast<std::size_t>(1000 * cfg.scale);
  for (std::size_t k = 0; k < total; ++k) {
    auto rng = case_rng(cfg.seed, 4, k);
    const auto pt = polya_points()[pick(rng, polya_points().size())];
    const std::size_t n = std::vector<std::size_t>{8, 16}[pick(rng, 2)];
    const auto grid = Grid1D::periodic(n);
    StepFunction u(grid, random_values(rng, n));
    if (pick(rng, 8) == 0) u = rolled(periodic_rearrange_1d(u), static_cast<std::ptrdiff_t>(pick(rng, 2 * n)));
    const SeminormParams params{pt.s, pt.p};
    const auto m = check_polya_periodic(u, params, k % 10 == 0);
    const auto cls = classify_equality(u, u, EqualityContext::PeriodicPS, j_library("power", {pt.p}));
    record_polya(rep, fmt_case(k, "n1-N" + std::to_string(u.size())), m, cls, pt.p, reproducer(cfg.seed, rep.suite, k));
  }
  const auto total2 = static_cast<std::size_t>(100 * cfg.scale);
  const auto g1 = Grid1D::periodic(8);
  const auto g2 = Grid1D::interval(8, -2.0, 2.0);
  for (std::size_t k = 0; k < total2; ++k) {
    auto rng = case_rng(cfg.seed, 5, k);
    const auto pt = polya_points()[pick(rng, 3)];
    auto vals = random_values(rng, 64);
    const GridFunctionND u({g1, g2}, vals);
    const SeminormParams params{pt.s, pt.p};
    const auto m = check_polya_periodic(u, params, k % 10 == 0);
    const auto cls = classify_equality(u, EqualityContext::PeriodicPS, pt.p);
    record_polya(rep, fmt_case(total + k, "n2-8x8"), m, cls, pt.p, reproducer(cfg.seed, rep.suite, total + k));
  }
  return rep;
}

VerificationReport suite_polya_cyl(const SuiteConfig& cfg) {
  VerificationReport rep;
  rep.suite = "polya-cyl";
  const auto total = static_cast<std::size_t>(100 * cfg.scale);
  const auto g1 = Grid1D::periodic(8);
  const auto g2 = Grid1D::interval(8, -2.0, 2.0);
  for (std::size_t k = 0; k < total; ++k) {
    auto rng = case_rng(cfg.seed, 6, k);
    const auto pt = polya_points()[pick(rng, 3)];
    auto vals = random_values(rng, 64);
    for (std::size_t i1 = 0; i1 < 8; ++i1) vals[i1 * 8] = vals[i1 * 8 + 7] = 0.0;
    GridFunctionND u({g1, g2}, vals);
    if (pick(rng, 8) == 0) {
      // x2-slices already symmetric decreasing and centered: a fixed point up to refinement.
      u = cylindrical_rearrange(u);
    }
    const SeminormParams params{pt.s, pt.p};
    const auto m = check_polya_cylindrical(u, params, k % 10 == 0);
    const auto cls = classify_equality(u, EqualityContext::CylindricalPS, pt.p);
    record_polya(rep, fmt_case(k, "n2"), m, cls, pt.p, reproducer(cfg.seed, rep.suite, k));
  }
  return rep;
}

VerificationReport suite_exhaustive(const SuiteConfig&) {
  VerificationReport rep;
  rep.suite = "exhaustive";
  const std::vector<ConvexJ> costs{j_library("power", {2.0}), j_library("abs"), j_library("one_sided")};
  for (double t : {0.25, 1.0}) {
    for (const auto& [cells, levels] : std::vector<std::pair<std::size_t, std::size_t>>{{4, 3}, {6, 2}}) {
      for (const auto& j : costs) rep.merge(exhaustive_oracle_circle({cells, levels, t}, j));
    }
  }
  return rep;
}

}  // namespace

VerificationReport run_suite(const SuiteConfig& cfg) {
  std::vector<std::string> names;
  for (const auto& s : cfg.suites) {
    if (s == "all") {
      names = suite_names();
      break;
    }
    if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
      throw Error(Errc::UnknownName, "unknown suite '" + s + "'");
    names.push_back(s);
  }
  auto run_one = [&cfg](const std::string& s) {
    if (s == "smoke") return suite_smoke(cfg);
    if (s == "riesz") return suite_riesz(cfg);
    if (s == "nonexp-circle") return suite_nonexp_circle(cfg);
    if (s == "nonexp-rn") return suite_nonexp_rn(cfg);
    if (s == "polya-per") return suite_polya_per(cfg);
    if (s == "polya-cyl") return suite_polya_cyl(cfg);
    return suite_exhaustive(cfg);
  };
  std::vector<VerificationReport> parts(names.size());
  std::vector<std::exception_ptr> errors(names.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < names.size(); k = next++) {
      try {
        parts[k] = run_one(names[k]);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const std::size_t n_threads = std::clamp<std::size_t>(cfg.threads, 1, names.size());
  std::vector<std::thread> pool;
  for (std::size_t k = 1; k < n_threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  VerificationReport out;
  for (std::size_t k = 0; k < names.size(); ++k) {
    if (errors[k]) std::rethrow_exception(errors[k]);
    out.merge(parts[k]);
  }
  return out;
}

}  // namespace polya
