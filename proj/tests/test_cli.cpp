#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "polya/cli.hpp"

using namespace polya;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "polya");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string write(const std::string& name, const std::string& text) {
  const auto dir = std::filesystem::current_path() / "cli_scratch";
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream(path) << text;
  return path.string();
}

}  // namespace

TEST_CASE("version and usage errors") {
  const auto v = run({"--version"});
  CHECK(v.code == kExitOk);
  CHECK(v.out.find("POLYA_CACHE_DIR") != std::string::npos);
  CHECK(run({"seminorm"}).code == kExitConfigError);
  CHECK(run({"frobnicate"}).code == kExitConfigError);
  CHECK(run({"seminorm", "--in", "/nonexistent/f.json"}).code == kExitConfigError);
}

TEST_CASE("malformed and invalid documents exit with a config error") {
  const auto bad = write("bad.json", "{\"grid\": {\"n\": 4},\n  \"values\": [0, 1, 2,]}\n");
  const auto r = run({"seminorm", "--in", bad});
  CHECK(r.code == kExitConfigError);
  CHECK(r.err.find("line 2") != std::string::npos);
  CHECK(r.err.find("column") != std::string::npos);
  const auto extra = write("extra.json", R"({"grid": {"n": 2}, "values": [0, 1], "colour": 3})");
  CHECK(run({"seminorm", "--in", extra}).code == kExitConfigError);
  const auto shape = write("shape.json", R"({"grid": {"n": 3}, "values": [0, 1]})");
  CHECK(run({"seminorm", "--in", shape}).code == kExitConfigError);
}

TEST_CASE("seminorm of a constant is zero by both routes") {
  const auto c = write("const.json", R"({"grid": {"n": 6, "domain": "periodic"}, "values": [2, 2, 2, 2, 2, 2]})");
  const auto r = run({"seminorm", "--method", "both", "--s", "0.4", "--p", "2", "--in", c});
  CHECK(r.code == kExitOk);
  std::istringstream lines(r.out);
  std::string header;
  std::getline(lines, header);
  CHECK(header.rfind("value,method,tolerance", 0) == 0);
  int rows = 0;
  for (std::string line; std::getline(lines, line); ++rows) CHECK(line.rfind("0,", 0) == 0);
  CHECK(rows == 2);
}

TEST_CASE("rearrange, energy, perimeter and sweep produce output") {
  const auto u = write("u.json", R"({"grid": {"n": 4}, "values": [0, 3, 1, 2]})");
  const auto rr = run({"rearrange", "--op", "periodic", "--in", u});
  CHECK(rr.code == kExitOk);
  CHECK(rr.out.find("[0.0,1.0,2.0,3.0,3.0,2.0,1.0,0.0]") != std::string::npos);

  const auto en = run({"energy", "--J", "power:2", "--kernel", "heat:t=0.5", "--u", u, "--v", u});
  CHECK(en.code == kExitOk);
  CHECK(en.out.rfind("energy,divergent", 0) == 0);

  const auto set = write("set.json", R"({"grid": {"n": 8}, "values": [0, 0, 1, 1, 1, 1, 0, 0]})");
  CHECK(run({"perimeter", "--s", "0.5", "--set", set}).code == kExitOk);
  CHECK(run({"perimeter", "--s", "0.5", "--set", u}).code == kExitConfigError);

  const auto two = write("two.json", R"({"grid": {"n": 4}, "values": [0, 2, 1, 1]})");
  const auto sw = run({"sweep", "--in", two, "--p", "1", "--s-values", "0.2,0.5,0.8", "--method", "both"});
  CHECK(sw.code == kExitOk);
  int rows = 0;
  std::istringstream lines(sw.out);
  for (std::string line; std::getline(lines, line);) ++rows;
  CHECK(rows == 4);

  CHECK(run({"kernels", "--dump", "--kernel", "riesz:sigma=0.5", "--n", "8"}).code == kExitOk);
  CHECK(run({"kernels", "--dump", "--kernel", "riesz:t=1", "--n", "8"}).code == kExitConfigError);
}

TEST_CASE("verify output is byte-identical across thread budgets") {
  const auto one = run({"verify", "--suite", "smoke", "--suite", "riesz", "--suite", "polya-per", "--scale", "0.05",
                        "--seed", "7", "--threads", "1"});
  const auto four = run({"verify", "--suite", "smoke", "--suite", "riesz", "--suite", "polya-per", "--scale", "0.05",
                         "--seed", "7", "--threads", "4"});
  CHECK(one.code == kExitOk);
  CHECK(four.code == kExitOk);
  CHECK(one.out == four.out);
  CHECK(one.out.rfind("suite,case_id,margin,class_predicted,class_observed,status", 0) == 0);
}
