#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "expboot/cli.hpp"
#include "expboot/euler_lagrange.hpp"
#include "support.hpp"

using namespace expboot;
using namespace expboot::cli;
using Json = nlohmann::json;
using testing::ex;
using testing::Gen;
using testing::q;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("expboot_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

// Every string leaf in `j` that looks like an exponent must parse back to itself.
void check_round_trip(const Json& j, int& checked) {
  if (j.is_object() || j.is_array()) {
    for (const auto& item : j) check_round_trip(item, checked);
    return;
  }
  if (!j.is_string()) return;
  const std::string s = j.get<std::string>();
  if (s.empty() || s.find(' ') != std::string::npos || s.find('.') != std::string::npos) return;
  try {
    const Exponent e = Exponent::parse(s);
    CHECK(e.to_string() == s);
    ++checked;
  } catch (const std::exception&) {
  }
}

}  // namespace

TEST_CASE("classify examples") {
  Run two = run({"classify", "--p", "21/5"});
  CHECK(two.code == 0);
  CHECK(two.out.find(R"("regime":"two","q_star":"42/17-o","t_star":"6-o")") != std::string::npos);
  Json j = Json::parse(two.out);
  CHECK(j["command"] == "classify");
  CHECK(j["input"]["p"] == "21/5");
  CHECK(j["result"]["euler_lagrange"]["k_star"] == 6);
  CHECK(j["result"]["euler_lagrange"]["map"] == "21/5");
  CHECK(j["result"]["euler_lagrange"]["spinor"] == "21/10");
  CHECK(j["meta"]["digits"] == 12);
  CHECK(j["meta"]["version"] == kVersion);
  CHECK(j["meta"]["hypotheses"].get<std::string>().find("smallness") != std::string::npos);

  Run one = run({"classify", "--p", "5"});
  CHECK(one.code == 0);
  CHECK(one.out.find(R"("regime":"one","map":"5","spinor":"5/2")") != std::string::npos);

  Run inf = run({"classify", "--p", "inf"});
  CHECK(inf.code == 0);
  CHECK(Json::parse(inf.out)["result"]["map"] == "inf-o");
}

TEST_CASE("classify at 4.15 renders the stall at configured digits") {
  Run r = run({"--digits", "6", "classify", "--p", "4.15"});
  REQUIRE(r.code == 0);
  Json j = Json::parse(r.out);
  CHECK(j["input"]["p"] == "83/20");
  CHECK(j["result"]["decimal"]["q_star"] == "2.265422");
  CHECK(j["result"]["euler_lagrange"]["k_star"] == 11);
  CHECK(j["meta"]["digits"] == 6);
}

TEST_CASE("fixed-point examples") {
  Run five = run({"fixed-point", "--p", "5"});
  CHECK(five.code == 0);
  CHECK(five.out.find(R"("radicand":"-71","roots":null)") != std::string::npos);
  Json exact = Json::parse(run({"fixed-point", "--p", "21/5"}).out);
  CHECK(exact["result"]["roots"]["q_minus"] == "42/17");
  CHECK(exact["result"]["roots"]["q_plus"] == "84/29");
  CHECK(exact["result"]["barrier"] == "42/11");
  CHECK(exact["result"]["critical"] == "8/5+16/15*sqrt(6)");
  CHECK(exact["result"]["discriminant_sign"] == "positive");
}

TEST_CASE("exit codes") {
  CHECK(run({"classify", "--p", "abc"}).code == 2);
  CHECK(run({"classify", "--p", "4"}).code == 1);
  CHECK(run({"classify", "--p", "-3"}).code == 2);
  CHECK(run({"classify"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"classify", "--p", "5", "--bogus"}).code == 2);
  CHECK(run({"--format", "xml", "classify", "--p", "5"}).code == 2);
  CHECK(run({"--digits", "0", "classify", "--p", "5"}).code == 2);
  CHECK(run({"fixed-point", "--p", "inf"}).code == 1);
  CHECK(run({"scheme", "run", "--file", "/nonexistent.scm-exp", "--param", "p=5"}).code == 1);
  Run help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("classify") != std::string::npos);
  Run bad = run({"classify", "--p", "4"});
  CHECK(lines(bad.err).size() == 1);
}

TEST_CASE("trace emits line records with a summary") {
  Run r = run({"trace", "--p", "5"});
  REQUIRE(r.code == 0);
  auto rows = lines(r.out);
  REQUIRE(rows.size() == 4);
  Json first = Json::parse(rows[0]);
  CHECK(first["k"] == 0);
  CHECK(first["q"] == "70/29-o");
  CHECK(Json::parse(rows[1])["k"] == 1);
  CHECK(Json::parse(rows[1])["case"] == "case1-improve");
  Json summary = Json::parse(rows.back());
  CHECK(summary["terminal"] == "case2-barrier");
  CHECK(summary["classification"]["regime"] == "one");

  Run csv = run({"--format", "csv", "trace", "--p", "5"});
  CHECK(lines(csv.out).front() == "k,case,q,t,q_decimal,t_decimal");
}

TEST_CASE("trace --scheme el reports k_star") {
  Run r = run({"trace", "--p", "4.15", "--scheme", "el"});
  REQUIRE(r.code == 0);
  auto rows = lines(r.out);
  Json summary = Json::parse(rows.back());
  CHECK(summary["k_star"] == 11);
  CHECK(rows.size() == 13);

  Run from = run({"trace", "--p", "21/5", "--scheme", "el", "--start", "q=42/17"});
  REQUIRE(from.code == 0);
  CHECK(Json::parse(lines(from.out).back())["k_star"] == 6);
}

TEST_CASE("trace through a DSL scheme file and scheme run") {
  const std::string file = std::string(EXPBOOT_SOURCE_DIR) + "/schemes/euler_lagrange.scm-exp";
  Run r = run({"trace", "--p", "21/5", "--scheme", file, "--param", "q0=42/17"});
  REQUIRE(r.code == 0);
  Json last = Json::parse(lines(r.out).back());
  CHECK(last["terminal"] == "barrier");
  CHECK(last["steps"] == 6);

  Run s = run({"--format", "text", "scheme", "run", "--file", file, "--param", "p=21/5", "--param", "q0=42/17"});
  REQUIRE(s.code == 0);
  CHECK(s.out.rfind("scheme euler_lagrange\n", 0) == 0);
  CHECK(s.out.find("terminal barrier") != std::string::npos);

  Run stuck = run({"--max-steps", "5", "scheme", "run", "--file",
                   std::string(EXPBOOT_SOURCE_DIR) + "/schemes/abstract.scm-exp", "--param", "p=21/5"});
  CHECK(stuck.code == 1);
  CHECK(lines(stuck.out).size() == 7);
}

TEST_CASE("figure fixed-points CSV") {
  Run r = run({"figure", "fixed-points", "--p-min", "4.01", "--p-max", "4.21", "--samples", "100"});
  REQUIRE(r.code == 0);
  auto rows = lines(r.out);
  REQUIRE(rows.size() == 101);
  CHECK(rows[0] == "p,q_minus,q_plus,Q0");
  double prev_minus = 0, prev_plus = 1e9;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    std::istringstream in(rows[i]);
    std::string p, minus, plus, barrier;
    std::getline(in, p, ',');
    std::getline(in, minus, ',');
    std::getline(in, plus, ',');
    std::getline(in, barrier, ',');
    REQUIRE_FALSE(minus.empty());
    CHECK(std::stod(minus) > prev_minus);
    CHECK(std::stod(plus) < prev_plus);
    CHECK(std::stod(plus) < std::stod(barrier));
    prev_minus = std::stod(minus);
    prev_plus = std::stod(plus);
  }
  CHECK(rows[1].rfind("4.01,", 0) == 0);
  CHECK(rows.back().rfind("4.21,", 0) == 0);

  Run wide = run({"figure", "fixed-points", "--p-min", "4.1", "--p-max", "5", "--samples", "10"});
  CHECK(lines(wide.out).back() == "5,,,3.333333333333");
}

TEST_CASE("figure trace CSV and SVG") {
  Run five = run({"figure", "trace", "--p", "5"});
  auto rows = lines(five.out);
  CHECK(rows[0] == "k,q_k,t_k,Q0");
  std::istringstream last(rows.back());
  std::string k, qk;
  std::getline(last, k, ',');
  std::getline(last, qk, ',');
  CHECK(std::stod(qk) >= 10.0 / 3.0);

  Run slow = run({"--digits", "9", "figure", "trace", "--p", "4.15"});
  auto slow_rows = lines(slow.out);
  CHECK(slow_rows.size() >= 51);
  double prev = 0;
  for (std::size_t i = 1; i < slow_rows.size(); ++i) {
    std::istringstream in(slow_rows[i]);
    std::getline(in, k, ',');
    std::getline(in, qk, ',');
    CHECK(std::stod(qk) >= prev);
    prev = std::stod(qk);
  }
  CHECK(std::abs(prev - 2.2654217671747) < 1e-6);

  Run svg = run({"figure", "trace", "--p", "5", "--svg"});
  CHECK(svg.out.rfind("<svg", 0) == 0);
  CHECK(svg.out.find("<polyline") != std::string::npos);
  CHECK(svg.out.find("stroke-dasharray") != std::string::npos);
}

TEST_CASE("emit_figure writes deterministic files") {
  auto dir = scratch_dir("figures");
  Run a = run({"--output-dir", dir.string(), "figure", "fixed-points", "--p-min", "4.01", "--p-max", "4.21",
               "--samples", "25", "--svg"});
  REQUIRE(a.code == 0);
  auto paths = lines(a.out);
  REQUIRE(paths.size() == 2);
  const std::string csv1 = slurp(paths[0]);
  const std::string svg1 = slurp(paths[1]);
  Run b = run({"--output-dir", dir.string(), "figure", "fixed-points", "--p-min", "4.01", "--p-max", "4.21",
               "--samples", "25", "--svg"});
  REQUIRE(b.code == 0);
  CHECK(slurp(paths[0]) == csv1);
  CHECK(slurp(paths[1]) == svg1);
  CHECK(csv1.find('\r') == std::string::npos);
  CHECK(std::count(svg1.begin(), svg1.end(), '\n') > 3);

  FigureParams params;
  params.p = Exponent(q(83, 20));
  RunConfig config;
  config.output_dir = dir;
  auto written = emit_figure(FigureKind::trace, params, config);
  REQUIRE(written.size() == 1);
  CHECK(written[0].filename() == "trace_p83_20.csv");

  // A regular file in place of the directory cannot be written into.
  auto blocker = dir / "blocker";
  std::ofstream(blocker) << "x";
  config.output_dir = blocker;
  CHECK_THROWS_AS(emit_figure(FigureKind::trace, params, config), std::runtime_error);
  CHECK(run({"--output-dir", blocker.string(), "figure", "trace", "--p", "5"}).code == 1);
  std::filesystem::remove_all(dir);
}

TEST_CASE("config file values are overridden by flags") {
  auto dir = scratch_dir("config");
  std::filesystem::create_directories(dir);
  auto path = dir / "run.conf";
  std::ofstream(path) << "# defaults\ndigits = 4\nmax_steps = 50\nformat = csv\n";
  RunConfig c = load_config(path);
  CHECK(c.digits == 4);
  CHECK(c.max_steps == 50);
  CHECK(c.format == OutputFormat::csv);

  Json j = Json::parse(run({"--config", path.string(), "--format", "json", "classify", "--p", "21/5"}).out);
  CHECK(j["meta"]["digits"] == 4);
  CHECK(j["result"]["decimal"]["q_star"] == "2.4706");
  j = Json::parse(run({"--config", path.string(), "--digits", "3", "--format", "json", "classify", "--p", "21/5"}).out);
  CHECK(j["meta"]["digits"] == 3);

  std::ofstream(path) << "colour = blue\n";
  CHECK_THROWS_AS(load_config(path), UsageError);
  CHECK(run({"--config", path.string(), "classify", "--p", "5"}).code == 2);
  CHECK(run({"--config", (dir / "missing.conf").string(), "classify", "--p", "5"}).code == 2);
  std::filesystem::remove_all(dir);
}

TEST_CASE("JSON exact strings round-trip through Exponent::parse") {
  int checked = 0;
  for (const char* p : {"21/5", "5", "4.15", "inf", "4.2", "7/2"}) {
    Run r = run({"classify", "--p", p});
    if (r.code != 0) continue;
    check_round_trip(Json::parse(r.out), checked);
  }
  for (const char* p : {"21/5", "5", "4.15"}) check_round_trip(Json::parse(run({"fixed-point", "--p", p}).out), checked);
  for (const auto& row : lines(run({"trace", "--p", "4.15", "--scheme", "el"}).out)) {
    check_round_trip(Json::parse(row), checked);
  }
  CHECK(checked > 40);
}

TEST_CASE("classify agrees with the library for sampled p") {
  Gen gen;
  for (int i = 0; i < 20; ++i) {
    const Rational p = gen.rational_in(q(401, 100), 8, 97);
    const Exponent e(p);
    CAPTURE(to_exact_string(p));
    Run r = run({"classify", "--p", to_exact_string(p)});
    REQUIRE(r.code == 0);
    Json j = Json::parse(r.out);
    BootstrapOptions opts;
    opts.witness_tolerance = 1000;
    const BootstrapResult lib = bootstrap_run(e, opts);
    const CoupledResult el = el_run(e, opts);
    CHECK(j["result"]["regime"] == to_string(lib.classification.regime));
    CHECK(j["result"]["map"] == lib.classification.map_space.to_string());
    CHECK(j["result"]["spinor"] == lib.classification.spinor_space.to_string());
    if (lib.classification.stall) {
      CHECK(j["result"]["q_star"] == lib.classification.stall->q_star.to_string());
      CHECK(j["result"]["t_star"] == lib.classification.stall->t_star.to_string());
    }
    CHECK(j["result"]["euler_lagrange"]["k_star"] == el.k_star);
  }
}

TEST_CASE("repeated invocations are byte-identical") {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"classify", "--p", "4.15"}, {"trace", "--p", "4.2"}, {"fixed-point", "--p", "4.1"},
        {"figure", "trace", "--p", "4.15", "--svg"}}) {
    CHECK(run(args).out == run(args).out);
  }
}
