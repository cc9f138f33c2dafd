#include "polya/io.hpp"

#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace polya {

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& what) { throw Error(Errc::ConfigError, what); }

std::string position(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) config_error("unknown key '" + key + "' in " + where);
  }
}

Grid1D parse_grid(const json& g) {
  if (!g.is_object()) config_error("grid must be an object");
  reject_unknown(g, {"n", "domain"}, "grid");
  if (!g.contains("n") || !g["n"].is_number_unsigned() || g["n"].get<std::size_t>() == 0)
    config_error("grid.n must be a positive integer");
  const auto n = g["n"].get<std::size_t>();
  const json d = g.value("domain", json("periodic"));
  if (d.is_string() && d.get<std::string>() == "periodic") return Grid1D::periodic(n);
  if (d.is_array() && d.size() == 2 && d[0].is_number() && d[1].is_number())
    return Grid1D::interval(n, d[0].get<double>(), d[1].get<double>());
  config_error("grid.domain must be \"periodic\" or [lo, hi]");
}

void flatten(const json& v, std::size_t depth, const std::vector<std::size_t>& shape, std::vector<double>& out) {
  if (depth == shape.size()) {
    if (!v.is_number()) config_error("values must be numbers");
    out.push_back(v.get<double>());
    return;
  }
  if (!v.is_array() || v.size() != shape[depth])
    config_error("values must be nested arrays of extent " + std::to_string(shape[depth]) + " at depth " +
                 std::to_string(depth));
  for (const auto& x : v) flatten(x, depth + 1, shape, out);
}

json grid_json(const Grid1D& g) {
  json out{{"n", g.size()}};
  if (g.is_periodic()) out["domain"] = "periodic";
  else out["domain"] = json::array({g.lo(), g.hi()});
  return out;
}

json nest(std::span<const double> vals, const std::vector<Grid1D>& axes, std::size_t depth, std::size_t& pos) {
  if (depth == axes.size()) return vals[pos++];
  json arr = json::array();
  for (std::size_t k = 0; k < axes[depth].size(); ++k) arr.push_back(nest(vals, axes, depth + 1, pos));
  return arr;
}

std::string nd_json(const std::vector<Grid1D>& axes, std::span<const double> vals) {
  json out;
  out["axes"] = json::array();
  for (const auto& a : axes) out["axes"].push_back(grid_json(a));
  std::size_t pos = 0;
  out["values"] = nest(vals, axes, 0, pos);
  return out.dump() + "\n";
}

}  // namespace

StepFunction FunctionDoc::step_function() const {
  if (axes.size() != 1) config_error("expected a 1D function");
  return StepFunction(axes[0], values);
}

GridFunctionND FunctionDoc::grid_function() const {
  if (axes.size() < 2) config_error("expected a function with at least two axes");
  return GridFunctionND(axes, values);
}

BoxFunction FunctionDoc::box_function() const { return BoxFunction(axes, values); }

FunctionDoc parse_function(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    config_error("malformed JSON at " + position(text, e.byte == 0 ? 0 : e.byte - 1) + ": " + e.what());
  }
  if (!doc.is_object()) config_error("function document must be an object");
  FunctionDoc out;
  if (doc.contains("grid")) {
    reject_unknown(doc, {"grid", "values"}, "function");
    out.axes.push_back(parse_grid(doc["grid"]));
  } else if (doc.contains("axes")) {
    reject_unknown(doc, {"axes", "values"}, "function");
    if (!doc["axes"].is_array() || doc["axes"].empty()) config_error("axes must be a nonempty array");
    for (const auto& a : doc["axes"]) out.axes.push_back(parse_grid(a));
  } else {
    config_error("function needs \"grid\" or \"axes\"");
  }
  if (!doc.contains("values")) config_error("function needs \"values\"");
  std::vector<std::size_t> shape;
  for (const auto& a : out.axes) shape.push_back(a.size());
  flatten(doc["values"], 0, shape, out.values);
  return out;
}

FunctionDoc load_function(const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_function(ss.str());
  } catch (const Error& e) {
    const std::string what = e.what();
    const std::string prefix = std::string(to_string(Errc::ConfigError)) + ": ";
    config_error(path + ": " + (what.rfind(prefix, 0) == 0 ? what.substr(prefix.size()) : what));
  }
}

std::string to_json(const StepFunction& u) {
  json out{{"grid", grid_json(u.grid())}, {"values", std::vector<double>(u.values().begin(), u.values().end())}};
  return out.dump() + "\n";
}

std::string to_json(const GridFunctionND& u) { return nd_json(u.shape().axes(), u.values()); }

std::string to_json(const BoxFunction& u) { return nd_json(u.shape().axes(), u.values()); }

KernelSpec parse_kernel(std::string_view text) {
  const auto colon = text.find(':');
  const std::string family(text.substr(0, colon));
  double t = 1.0;
  double shift = 0.0;
  double sigma = 0.5;
  bool have_t = false;
  bool have_sigma = false;
  if (colon != std::string_view::npos) {
    std::stringstream rest{std::string(text.substr(colon + 1))};
    std::string item;
    while (std::getline(rest, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) config_error("kernel parameter '" + item + "' needs key=value");
      const std::string key = item.substr(0, eq);
      double val = 0.0;
      try {
        std::size_t used = 0;
        val = std::stod(item.substr(eq + 1), &used);
        if (used != item.size() - eq - 1) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        config_error("bad kernel value in '" + item + "'");
      }
      if (key == "t") t = val, have_t = true;
      else if (key == "shift" && family == "heat") shift = val;
      else if (key == "sigma") sigma = val, have_sigma = true;
      else config_error("unknown kernel parameter '" + key + "' for " + family);
    }
  }
  if (family == "heat" && !have_sigma) return HeatKernel{t, shift};
  if (family == "gaussian" && !have_sigma) return GaussianKernel{t};
  if (family == "riesz" && !have_t) return RieszKernel{sigma};
  config_error("unknown kernel '" + std::string(text) + "'");
}

std::string kernel_key(const KernelSpec& spec) {
  std::ostringstream os;
  os << std::setprecision(17);
  if (const auto* h = std::get_if<HeatKernel>(&spec)) os << "heat-t" << h->t << "-s" << h->shift;
  else if (const auto* r = std::get_if<RieszKernel>(&spec)) os << "riesz-sigma" << r->sigma;
  else os << "gaussian-t" << std::get<GaussianKernel>(spec).t;
  return os.str();
}

namespace {

constexpr std::uint64_t kMagic = 0x31574b504f4c5950ull;

void put(std::ofstream& out, const void* p, std::size_t n) { out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n)); }

template <class T>
bool get(std::ifstream& in, T& x) {
  return static_cast<bool>(in.read(reinterpret_cast<char*>(&x), sizeof(T)));
}

}  // namespace

KernelWeights cached_weights(const KernelSpec& spec, const Grid1D& grid) {
  const char* dir = std::getenv(kCacheEnv);
  if (!dir || !*dir) return weights_for(spec, grid);
  std::ostringstream name;
  name << std::setprecision(17) << kernel_key(spec) << "-N" << grid.size() << (grid.is_periodic() ? "-per" : "-line")
       << "-lo" << grid.lo() << "-hi" << grid.hi() << ".bin";
  const std::filesystem::path path = std::filesystem::path(dir) / name.str();
  if (std::ifstream in(path, std::ios::binary); in) {
    std::uint64_t magic = 0;
    std::uint8_t flags = 0;
    std::uint64_t nt = 0;
    std::uint64_t ne = 0;
    double acc = 0.0;
    if (get(in, magic) && magic == kMagic && get(in, flags) && get(in, acc) && get(in, nt) && get(in, ne) &&
        nt < (1u << 28) && ne < (1u << 28)) {
      std::vector<double> table(nt);
      std::vector<double> ext(ne);
      if (in.read(reinterpret_cast<char*>(table.data()), static_cast<std::streamsize>(nt * sizeof(double))) &&
          in.read(reinterpret_cast<char*>(ext.data()), static_cast<std::streamsize>(ne * sizeof(double))))
        return KernelWeights(grid, flags & 1, flags & 2, std::move(table), std::move(ext), acc);
    }
  }
  auto w = weights_for(spec, grid);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const auto tmp = path.string() + ".tmp";
  if (std::ofstream out(tmp, std::ios::binary); out) {
    const std::uint8_t flags = (w.periodized() ? 1 : 0) | (w.singular() ? 2 : 0);
    const double acc = w.accuracy();
    const std::uint64_t nt = w.table().size();
    const std::uint64_t ne = w.exterior().size();
    put(out, &kMagic, sizeof kMagic);
    put(out, &flags, sizeof flags);
    put(out, &acc, sizeof acc);
    put(out, &nt, sizeof nt);
    put(out, &ne, sizeof ne);
    put(out, w.table().data(), nt * sizeof(double));
    put(out, w.exterior().data(), ne * sizeof(double));
    out.close();
    std::filesystem::rename(tmp, path, ec);
  }
  return w;
}

}  // namespace polya
