#include <cstdio>
#include <sstream>

#include <doctest.h>

#include "relhyp/cli.hpp"
#include "relhyp/presentation.hpp"
#include "support.hpp"

using namespace relhyp;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(RunConfig c) {
  std::ostringstream out, err;
  const int code = run(c, out, err);
  return {code, out.str(), err.str()};
}

RunConfig config(const std::string& sub, const std::string& input) {
  RunConfig c;
  c.subcommand = sub;
  c.input = testing::data_path(input);
  return c;
}

std::vector<std::string> data_rows(const std::string& csv) {
  std::vector<std::string> rows;
  std::istringstream in(csv);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    rows.push_back(line);
  }
  return rows;
}

}  // namespace

TEST_CASE("format_real") {
  CHECK(format_real(1.0) == "1.0");
  CHECK(format_real(-3.0) == "-3.0");
  CHECK(format_real(0.25) == "0.25");
  CHECK(format_real(1.0 / 3) == "0.333333333333");
}

TEST_CASE("area subcommand") {
  auto c = config("area", "z-example.json");
  c.word = "h1^2 h2^2";
  auto r = run_cli(c);
  REQUIRE(r.code == kExitOk);
  auto j = json::parse(r.out);
  CHECK(j["result"]["area"] == 2);
  CHECK(j["result"]["exact"] == true);
  CHECK(j["seed"] == 1);
  CHECK(j["version"] == version());
  CHECK(j["config"]["loop"] == "h1^2 h2^2");
}

TEST_CASE("window-lp subcommand") {
  auto c = config("window-lp", "z-example.json");
  c.radii = {4, 8};
  auto r = run_cli(c);
  REQUIRE(r.code == kExitOk);
  auto rows = data_rows(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].rfind("4,1.0,", 0) == 0);
  CHECK(rows[1].rfind("8,2.0,", 0) == 0);
  CHECK(r.out.find("# seed: 1") != std::string::npos);
}

TEST_CASE("exit codes") {
  CHECK(run_cli(config("parse", "malformed.json")).code == kExitParse);
  CHECK(run_cli(config("parse", "missing.json")).code == kExitParse);
  CHECK(run_cli(config("parse", "z-example.json")).code == kExitOk);

  auto bad_loop = config("area", "z-example.json");
  bad_loop.word = "h1^0";
  CHECK(run_cli(bad_loop).code == kExitParse);

  auto big = config("ball", "f2.json");
  big.radius = 30;
  CHECK(run_cli(big).code == kExitResource);

  auto nontrivial = config("area", "z-example.json");
  nontrivial.word = "h1";
  CHECK(run_cli(nontrivial).code == kExitOther);
}

TEST_CASE("oracle failures exit with code 3") {
  const std::string path = "relhyp-bad-oracle.json";
  {
    std::ofstream f(path);
    f << R"({"models": [{"label": 1, "kind": "Z^d", "rank": 1},
                         {"label": 2, "kind": "Z^d", "rank": 1}],
             "relators": ["h1 h2"], "oracle": {"kind": "free_product"}})";
  }
  RunConfig c;
  c.subcommand = "parse";
  c.input = path;
  CHECK(run_cli(c).code == kExitOracle);
  std::remove(path.c_str());
}

TEST_CASE("every subcommand is deterministic") {
  std::vector<RunConfig> configs;
  configs.push_back(config("parse", "z-example.json"));
  auto ball = config("ball", "free-product-zz.json");
  ball.radius = 2;
  ball.rho = 2;
  configs.push_back(ball);
  auto length = config("length", "z-example.json");
  length.word = "h1^2 h2";
  configs.push_back(length);
  auto area = config("area", "z-example.json");
  area.word = "h1^3 h2^3";
  configs.push_back(area);
  auto prof = config("dehn-profile", "free-product-zz.json");
  prof.n_max = 4;
  prof.rho = 2;
  prof.max_loops = 100;
  configs.push_back(prof);
  auto lp = config("window-lp", "z-example.json");
  lp.format = "json";
  configs.push_back(lp);
  auto flare = config("flare", "f2.json");
  flare.action = testing::data_path("f2-fib-action.json");
  flare.max_g_length = 4;
  configs.push_back(flare);
  auto corridor = config("corridor", "f2.json");
  corridor.action = testing::data_path("f2-fib-action.json");
  corridor.word = "x y";
  corridor.u = "a1";
  corridor.v = "a1^-1";
  configs.push_back(corridor);
  for (const auto& c : configs) {
    auto a = run_cli(c), b = run_cli(c);
    INFO(c.subcommand);
    CHECK(a.code == kExitOk);
    CHECK(a.out == b.out);
    CHECK_FALSE(a.out.empty());
  }
}
