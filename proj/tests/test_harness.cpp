#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "procstar/harness/runner.hpp"

using namespace procstar;
using namespace procstar::harness;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "procstar_harness_tests";
  fs::create_directories(dir);
  return dir / name;
}

fs::path write(const std::string& name, const std::string& text) {
  const fs::path p = scratch(name);
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t line_count(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(RunOptions options) {
  std::ostringstream out, err;
  const int code = run(options, out, err);
  return {code, out.str(), err.str()};
}

const char* kSmallSpec = R"({
  "seed": 5,
  "towers": [{"name": "prod", "rule": "product_matrix"}, {"name": "c3", "rule": "constant_commutative", "depth": 3}],
  "elements": [
    {"name": "three", "tower": "prod", "generator": {"scalar": [3, 0]}},
    {"name": "d", "tower": "c3", "top": {"level": 3, "blocks": [[[[1, 0]]], [[[2, 0]]], [[[4, 0]]]]}}
  ],
  "runs": [
    {"command": "norm", "claim": "scalar", "element": "three", "expect": {"status": "bounded", "M": 3}},
    {"command": "norm", "claim": "explicit", "element": "d", "expect": {"M": {"approx": 4, "tol": 1e-12}}}
  ]
})";

}  // namespace

TEST_CASE("parse errors report line and column") {
  try {
    parse_spec("{\n  \"towers\": [,]\n}", "bad.json");
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).rfind("bad.json:2:", 0) == 0);
  }
}

TEST_CASE("unresolved references name the offender") {
  const std::string text = R"({"towers": [], "elements": [{"name": "x", "tower": "nowhere", "generator": "identity"}]})";
  try {
    parse_spec(text, "ref.json");
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("nowhere") != std::string::npos);
  }
}

TEST_CASE("matrix literals must match the block sizes") {
  const std::string text = R"({"towers": [{"name": "t", "levels": [[2]]}],
    "elements": [{"name": "x", "tower": "t", "top": {"level": 1, "blocks": [[[[1, 0]]]]}}]})";
  CHECK_THROWS_AS(parse_spec(text, "shape.json"), ConfigError);
}

TEST_CASE("spec values parse") {
  CHECK(parse_complex(nlohmann::json::array({1.5, -2}), "z") == Complex(1.5, -2));
  CHECK_THROWS_AS(parse_complex(nlohmann::json(3), "z"), ConfigError);
  const Matrix m = parse_matrix(nlohmann::json::parse("[[[1,0],[0,1]],[[0,-1],[2,0]]]"), "m");
  CHECK(m(0, 1) == Complex(0, 1));
  CHECK(m(1, 0) == Complex(0, -1));
  CHECK_THROWS_AS(parse_matrix(nlohmann::json::parse("[[[1,0]],[[0,0],[1,0]]]"), "m"), ConfigError);
  CHECK(std::holds_alternative<RationalFn>(parse_function(nlohmann::json::parse(R"({"rational": 3})"), "f")));
  CHECK_THROWS_AS(parse_function(nlohmann::json::parse(R"({"rational": 0})"), "f"), ConfigError);
}

TEST_CASE("exit code 0 when every check passes") {
  const fs::path spec = write("small.json", kSmallSpec);
  const Outcome o = invoke({.command = "norm", .spec_path = spec.string()});
  CHECK(o.code == 0);
  CHECK(o.out.find("2/2 checks passed") != std::string::npos);
}

TEST_CASE("exit code 1 when a check fails") {
  std::string text = kSmallSpec;
  text.replace(text.find("\"M\": 3"), 6, "\"M\": 4");
  const fs::path spec = write("failing.json", text);
  const Outcome o = invoke({.command = "norm", .spec_path = spec.string()});
  CHECK(o.code == 1);
  CHECK(o.out.find("FAIL") != std::string::npos);
}

TEST_CASE("exit code 2 on configuration errors") {
  CHECK(invoke({.command = "norm", .spec_path = scratch("missing.json").string()}).code == 2);
  CHECK(invoke({.command = "frobnicate", .spec_path = write("small.json", kSmallSpec).string()}).code == 2);
  CHECK(invoke({.command = "norm"}).code == 2);
  const Outcome bad = invoke({.command = "norm", .spec_path = write("broken.json", "{\"towers\": [}").string()});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("broken.json:1:") != std::string::npos);

  // A randomized directive with no seed anywhere.
  const std::string unseeded = R"({"towers": [{"name": "p", "rule": "product_matrix", "depth": 3}],
    "runs": [{"command": "quotient-iso", "claim": "q", "tower": "p", "ideal_blocks": [1]}]})";
  const Outcome o = invoke({.command = "quotient-iso", .spec_path = write("unseeded.json", unseeded).string()});
  CHECK(o.code == 2);
  CHECK(o.err.find("seed") != std::string::npos);
  CHECK(invoke({.command = "quotient-iso", .spec_path = write("unseeded.json", unseeded).string(), .seed = 3}).code == 0);
}

TEST_CASE("an empty run writes only the header") {
  const fs::path spec = write("empty.json", R"({"towers": [], "runs": []})");
  const fs::path out = scratch("empty.jsonl");
  const Outcome o = invoke({.command = "norm", .spec_path = spec.string(), .out_path = out.string()});
  CHECK(o.code == 0);
  const std::string text = slurp(out);
  CHECK(line_count(text) == 1);
  const auto header = nlohmann::json::parse(text);
  CHECK(header.at("command") == "norm");
}

TEST_CASE("paper-examples: one record per check, all passing") {
  const fs::path out = scratch("paper.jsonl");
  const Outcome o = invoke({.command = "paper-examples", .out_path = out.string()});
  CHECK(o.code == 0);
  const std::string text = slurp(out);
  std::istringstream lines(text);
  std::string line;
  std::getline(lines, line);
  const auto header = nlohmann::json::parse(line);
  CHECK(header.contains("defaults"));
  std::size_t checks = 0;
  while (std::getline(lines, line)) {
    const auto record = nlohmann::json::parse(line);
    CHECK(record.at("pass") == true);
    CHECK_FALSE(record.at("claim").get<std::string>().empty());
    ++checks;
  }
  CHECK(o.out.find(std::to_string(checks) + "/" + std::to_string(checks) + " checks passed") != std::string::npos);
  CHECK(checks == line_count(o.out) - 2);
}

TEST_CASE("reports are byte-identical across runs") {
  const fs::path a = scratch("run_a.jsonl");
  const fs::path b = scratch("run_b.jsonl");
  REQUIRE(invoke({.command = "paper-examples", .out_path = a.string()}).code == 0);
  REQUIRE(invoke({.command = "paper-examples", .out_path = b.string()}).code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK_FALSE(slurp(a).empty());
}

TEST_CASE("the seed changes randomized records") {
  const SpecFile spec = load_spec(bundled_spec_path());
  const RunReport one = execute(spec, {.command = "quotient-iso", .seed = 1});
  const RunReport two = execute(spec, {.command = "quotient-iso", .seed = 1});
  const RunReport other = execute(spec, {.command = "quotient-iso", .seed = 2});
  CHECK(serialize(one) == serialize(two));
  CHECK(serialize(one) != serialize(other));
  CHECK(one.all_passed());
  CHECK(other.all_passed());
}

TEST_CASE("command-line overrides reach the directive") {
  const SpecFile spec = load_spec(bundled_spec_path());
  const RunReport r = execute(spec, {.command = "norm", .horizon = 30, .threshold = 10.0, .element = "L"});
  REQUIRE(r.checks.size() == 1);
  const auto& result = r.checks[0].at("result");
  CHECK(result.at("status") == "unbounded");
  CHECK(result.at("witness_level") == 12);
  CHECK(result.at("witness_value").get<double>() == doctest::Approx(11.0).epsilon(1e-12));
}

TEST_CASE("selftest passes") {
  const Outcome o = invoke({.command = "selftest", .seed = 9});
  CHECK(o.code == 0);
}

TEST_CASE("emit_trace surfaces I/O errors") {
  RunReport r;
  r.header = {{"command", "norm"}};
  CHECK_THROWS(emit_trace(r, "/nonexistent-dir/x/report.jsonl"));
}
