#include "polya/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "polya/functionals.hpp"
#include "polya/io.hpp"
#include "polya/rearrange.hpp"
#include "polya/seminorm.hpp"
#include "polya/verify.hpp"

#ifndef POLYA_VERSION
#define POLYA_VERSION "1.0.0"
#endif
#ifndef POLYA_BUILD_TYPE
#define POLYA_BUILD_TYPE "unknown"
#endif

namespace polya {

namespace {

std::string num(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

// CSV field quoting for free-text columns.
std::string field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::ConfigError, "cannot write '" + path + "'");
  f << text;
}

std::string version_text() {
  std::ostringstream os;
  os << "polya " << POLYA_VERSION << " (" << POLYA_BUILD_TYPE << " build)\n"
     << "margin zero band 1e-12 relative, indeterminate band 1e-8\n"
     << "laplace tolerance 1e-10, max nodes 50000\n"
     << "riesz 2d weight tolerance 1e-12\n"
     << "weight cache: $" << kCacheEnv << "\n";
  return os.str();
}

struct Options {
  // rearrange
  std::string op = "periodic";
  std::string in;
  std::string out;
  // energy
  std::string j_spec = "power:2";
  std::string kernel = "heat:t=1";
  std::string u_path;
  std::string v_path;
  // seminorm / perimeter / sweep
  double s = 0.5;
  double p = 1.0;
  std::string method = "both";
  double tolerance = 1e-10;
  std::string set_path;
  std::vector<double> s_values{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  std::string sweep_op = "periodic";
  // kernels
  bool dump = false;
  std::size_t cells = 8;
  std::string domain = "periodic";
  // verify
  std::vector<std::string> suites{"all"};
  std::uint64_t seed = 7;
  double scale = 1.0;
  std::size_t threads = 1;
};

Grid1D grid_from(const std::string& domain, std::size_t n) {
  if (domain == "periodic") return Grid1D::periodic(n);
  const auto comma = domain.find(',');
  if (comma == std::string::npos) throw Error(Errc::ConfigError, "domain must be 'periodic' or 'lo,hi'");
  try {
    return Grid1D::interval(n, std::stod(domain.substr(0, comma)), std::stod(domain.substr(comma + 1)));
  } catch (const std::invalid_argument&) {
    throw Error(Errc::ConfigError, "bad domain '" + domain + "'");
  }
}

int cmd_rearrange(const Options& o, std::ostream& out) {
  const auto doc = load_function(o.in);
  std::string text;
  if (o.op == "periodic") {
    text = doc.axes.size() == 1 ? to_json(periodic_rearrange_1d(doc.step_function()))
                                : to_json(periodic_rearrange_nd(doc.grid_function()));
  } else if (o.op == "cylindrical") {
    text = to_json(cylindrical_rearrange(doc.grid_function()));
  } else if (o.op == "schwarz") {
    text = doc.axes.size() == 1 ? to_json(symmetric_decreasing_1d(doc.step_function()))
                                : to_json(schwarz_discrete_nd(doc.box_function()));
  } else {
    text = doc.axes.size() == 1 ? to_json(symmetric_decreasing_1d(doc.step_function()))
                                : to_json(steiner_rearrange(doc.box_function()));
  }
  write_text(o.out, text, out);
  return kExitOk;
}

int cmd_energy(const Options& o, std::ostream& out) {
  const auto u = load_function(o.u_path).step_function();
  const auto v = load_function(o.v_path).step_function();
  const auto j = parse_j(o.j_spec);
  const auto spec = parse_kernel(o.kernel);
  const auto w = cached_weights(spec, u.grid());
  const auto r = u.grid().is_periodic() ? energy_circle(u, v, j, w) : energy_euclidean(u, v, j, w);
  std::ostringstream os;
  os << "energy,divergent,domain,note\n"
     << num(r.value) << ',' << (r.divergent ? "true" : "false") << ','
     << (u.grid().is_periodic() ? "circle" : "line") << ',' << field(r.note) << '\n';
  write_text(o.out, os.str(), out);
  return kExitOk;
}

SeminormResult seminorm_of(const FunctionDoc& doc, const SeminormParams& params, bool laplace, double tol) {
  LaplaceConfig cfg;
  cfg.tolerance = tol;
  if (doc.axes.size() == 1) {
    const auto u = doc.step_function();
    return laplace ? gagliardo_periodic_laplace(u, params, cfg) : gagliardo_periodic_direct(u, params);
  }
  const auto u = doc.grid_function();
  return laplace ? gagliardo_periodic_laplace(u, params, cfg) : gagliardo_periodic_direct(u, params);
}

int cmd_seminorm(const Options& o, std::ostream& out) {
  const auto doc = load_function(o.in);
  const SeminormParams params{o.s, o.p};
  validate(params);
  std::ostringstream os;
  os << "value,method,tolerance,wall_time_s\n";
  for (bool laplace : {false, true}) {
    if ((laplace && o.method == "direct") || (!laplace && o.method == "laplace")) continue;
    const auto start = std::chrono::steady_clock::now();
    const auto r = seminorm_of(doc, params, laplace, o.tolerance);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    os << (r.divergent ? "divergent" : num(r.value)) << ',' << (laplace ? "laplace" : "direct") << ','
       << num(r.tolerance) << ',' << std::fixed << std::setprecision(6) << secs << std::defaultfloat << '\n';
  }
  write_text(o.out, os.str(), out);
  return kExitOk;
}

int cmd_perimeter(const Options& o, std::ostream& out) {
  const auto doc = load_function(o.set_path);
  const double value = doc.axes.size() == 1 ? fractional_perimeter(doc.step_function(), o.s)
                                            : fractional_perimeter(doc.grid_function(), o.s);
  write_text(o.out, "perimeter,s\n" + num(value) + ',' + num(o.s) + '\n', out);
  return kExitOk;
}

int cmd_kernels(const Options& o, std::ostream& out) {
  if (!o.dump) throw Error(Errc::ConfigError, "kernels needs --dump");
  const auto grid = grid_from(o.domain, o.cells);
  const auto w = cached_weights(parse_kernel(o.kernel), grid);
  std::ostringstream os;
  os << "offset,weight,exterior\n";
  const auto n = static_cast<std::ptrdiff_t>(grid.size());
  if (w.periodized()) {
    for (std::ptrdiff_t d = 0; d < n; ++d) os << d << ',' << num(w(d)) << ",\n";
  } else {
    const auto ext = w.exterior();
    for (std::ptrdiff_t d = -n + 1; d < n; ++d) {
      os << d << ',' << num(w(d)) << ',';
      if (d >= 0) os << num(ext[static_cast<std::size_t>(d)]);
      os << '\n';
    }
  }
  write_text(o.out, os.str(), out);
  return kExitOk;
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
  SuiteConfig cfg;
  cfg.suites = o.suites;
  cfg.seed = o.seed;
  cfg.scale = o.scale;
  cfg.threads = o.threads;
  const auto rep = run_suite(cfg);
  std::ostringstream os;
  os << "suite,case_id,margin,class_predicted,class_observed,status\n";
  for (const auto& r : rep.records)
    os << r.suite << ',' << field(r.case_id) << ',' << num(r.margin) << ',' << field(r.class_predicted) << ','
       << r.class_observed << ',' << r.status << '\n';
  write_text(o.out, os.str(), out);
  err << "suites " << rep.suite << ": " << rep.cases << " cases, min relative margin " << num(rep.min_margin)
      << ", bound " << num(rep.bound) << "\n"
      << "equality predicted+observed " << rep.equality_predicted_and_observed << ", outside classes "
      << rep.equality_outside_classes << ", predicted but strict " << rep.predicted_but_strict << ", indeterminate "
      << rep.indeterminate << "\n";
  for (const auto& f : rep.failures) err << "FAIL " << f << "\n";
  return rep.passed() ? kExitOk : kExitVerificationFailure;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  const auto doc = load_function(o.in);
  std::ostringstream os;
  os << "s,p,seminorm,seminorm_rearranged,margin,laplace_margin\n";
  for (double s : o.s_values) {
    const SeminormParams params{s, o.p};
    validate(params);
    const bool with_laplace = o.method != "direct";
    PolyaMargin m;
    double plain = 0.0;
    if (doc.axes.size() == 1) {
      m = check_polya_periodic(doc.step_function(), params, with_laplace);
      plain = gagliardo_periodic_direct(refine(doc.step_function(), 2), params).value;
    } else {
      const auto u = doc.grid_function();
      m = o.sweep_op == "cylindrical" ? check_polya_cylindrical(u, params, with_laplace)
                                      : check_polya_periodic(u, params, with_laplace);
      plain = gagliardo_periodic_direct(u, params).value;
    }
    os << num(s) << ',' << num(o.p) << ',';
    if (m.divergent) {
      os << "divergent,divergent,divergent,\n";
      continue;
    }
    os << num(plain) << ',' << num(plain - m.direct) << ',' << num(m.direct) << ','
       << (m.has_laplace ? num(m.laplace) : "") << '\n';
  }
  write_text(o.out, os.str(), out);
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rearrangements, energies and periodic fractional seminorms on step functions"};
  app.require_subcommand(1);
  bool version = false;
  app.add_flag("--version", version, "Print build and tolerance defaults");
  Options o;

  auto* rea = app.add_subcommand("rearrange", "Apply a rearrangement to a function document");
  rea->add_option("--op", o.op)->check(CLI::IsMember({"periodic", "cylindrical", "schwarz", "steiner"}));
  rea->add_option("--in", o.in)->required();
  rea->add_option("--out", o.out);

  auto* en = app.add_subcommand("energy", "Energy E[u, v, g] with cost J");
  en->add_option("--J", o.j_spec);
  en->add_option("--kernel", o.kernel);
  en->add_option("--u", o.u_path)->required();
  en->add_option("--v", o.v_path)->required();
  en->add_option("--out", o.out);

  auto* sn = app.add_subcommand("seminorm", "Periodic Gagliardo seminorm");
  sn->add_option("--s", o.s);
  sn->add_option("--p", o.p);
  sn->add_option("--method", o.method)->check(CLI::IsMember({"direct", "laplace", "both"}));
  sn->add_option("--tolerance", o.tolerance);
  sn->add_option("--in", o.in)->required();
  sn->add_option("--out", o.out);

  auto* pe = app.add_subcommand("perimeter", "Fractional perimeter of a periodic set");
  pe->add_option("--s", o.s);
  pe->add_option("--set", o.set_path)->required();
  pe->add_option("--out", o.out);

  auto* ke = app.add_subcommand("kernels", "Kernel weight tables");
  ke->add_flag("--dump", o.dump, "Print the cell-pair weight table as CSV");
  ke->add_option("--kernel", o.kernel);
  ke->add_option("--n", o.cells)->check(CLI::PositiveNumber);
  ke->add_option("--domain", o.domain, "'periodic' or 'lo,hi'");
  ke->add_option("--out", o.out);

  auto* ve = app.add_subcommand("verify", "Run verification suites");
  ve->add_option("--suite", o.suites)->check(CLI::IsMember({"smoke", "riesz", "nonexp-circle", "nonexp-rn",
                                                            "polya-per", "polya-cyl", "exhaustive", "all"}));
  ve->add_option("--seed", o.seed);
  ve->add_option("--scale", o.scale)->check(CLI::PositiveNumber);
  ve->add_option("--threads", o.threads)->check(CLI::PositiveNumber);
  ve->add_option("--out", o.out);

  auto* sw = app.add_subcommand("sweep", "Polya-Szego margins over a grid of s values");
  sw->add_option("--in", o.in)->required();
  sw->add_option("--p", o.p);
  sw->add_option("--s-values", o.s_values)->delimiter(',');
  sw->add_option("--method", o.method)->check(CLI::IsMember({"direct", "laplace", "both"}));
  sw->add_option("--op", o.sweep_op)->check(CLI::IsMember({"periodic", "cylindrical"}));
  sw->add_option("--out", o.out);

  for (int k = 1; k < argc; ++k) {
    if (std::string(argv[k]) == "--version") {
      out << version_text();
      return kExitOk;
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "ConfigError: " << e.what() << "\n";
    return kExitConfigError;
  }

  try {
    if (*rea) return cmd_rearrange(o, out);
    if (*en) return cmd_energy(o, out);
    if (*sn) return cmd_seminorm(o, out);
    if (*pe) return cmd_perimeter(o, out);
    if (*ke) return cmd_kernels(o, out);
    if (*ve) return cmd_verify(o, out, err);
    return cmd_sweep(o, out);
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitConfigError;
  }
}

}  // namespace polya
