#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <random>
#include <sstream>

#include "erae/cli.hpp"
#include "erae/pure_entropy.hpp"
#include "erae/random_states.hpp"
#include "erae/roof_oracle.hpp"

using json = nlohmann::json;
namespace fs = std::filesystem;
using namespace erae;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
  json doc() const { return json::parse(out); }
};

Outcome call(std::vector<std::string> args) {
  args.insert(args.begin(), "erae");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "erae_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string write_file(const std::string& name, const std::string& body) {
  const fs::path p = scratch(name);
  std::ofstream(p) << body;
  return p.string();
}

std::string write_matrix(const std::string& name, const ComplexMatrix& m, std::size_t da, std::size_t db) {
  json re = json::array(), im = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json r = json::array(), c = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) {
      r.push_back(m(i, j).real());
      c.push_back(m(i, j).imag());
    }
    re.push_back(r);
    im.push_back(c);
  }
  return write_file(name, json{{"dimA", da}, {"dimB", db}, {"re", re}, {"im", im}}.dump());
}

double value(const Outcome& o) { return o.doc().at("value").get<double>(); }

}  // namespace

TEST_CASE("eval examples") {
  auto o = call({"eval", "--family", "werner", "--d", "3", "--F", "0.8", "--alpha", "0"});
  REQUIRE(o.code == cli::kOk);
  CHECK(value(o) == doctest::Approx(0.8).epsilon(1e-9));
  o = call({"eval", "--family", "isotropic", "--d", "3", "--F", "0.3333333333", "--alpha", "1"});
  REQUIRE(o.code == cli::kOk);
  CHECK(std::abs(value(o)) < 1e-9);
  o = call({"eval", "--family", "isotropic", "--d", "3", "--F", "0.85", "--alpha", "1"});
  CHECK(value(o) == doctest::Approx(1.13547).epsilon(1e-5));
  o = call({"eval", "--family", "pure", "--concurrence", "0.5", "--alpha", "1"});
  CHECK(value(o) == doctest::Approx(0.35459).epsilon(1e-5));
  o = call({"eval", "--family", "pure", "--schmidt", "0.5,0.5", "--alpha", "2"});
  CHECK(value(o) == doctest::Approx(1.0));
  CHECK(o.err.empty());

  const double s = 1 / std::sqrt(2.0);
  const std::string bell = write_matrix("bell.json", ComplexMatrix::outer(StateVector{s, 0, 0, s}), 2, 2);
  o = call({"eval", "--family", "two-qubit", "--matrix-file", bell, "--alpha", "2"});
  REQUIRE(o.code == cli::kOk);
  CHECK(value(o) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("exit codes") {
  CHECK(call({}).code == cli::kUsage);
  CHECK(call({"eval", "--alpha", "1"}).code == cli::kUsage);
  CHECK(call({"eval", "--family", "werner", "--alpha", "x", "--F", "0.1"}).code == cli::kUsage);
  CHECK(call({"eval", "--family", "werner", "--alpha", "1"}).code == cli::kUsage);
  CHECK(call({"curve", "--series", "nonsense"}).code == cli::kUsage);
  CHECK(call({"--format", "csv", "eval", "--family", "werner", "--F", "0.5", "--alpha", "1"}).code == cli::kUsage);
  CHECK(call({"verify", "--suite", "no-such-suite"}).code == cli::kUsage);
  CHECK(call({"--log-base", "10", "eval", "--family", "werner", "--F", "0.5", "--alpha", "1"}).code == cli::kUsage);
  CHECK(call({"--help"}).code == cli::kOk);

  auto o = call({"eval", "--family", "isotropic", "--d", "3", "--F", "1.3", "--alpha", "1"});
  CHECK(o.code == cli::kDomain);
  CHECK(o.doc()["error"]["code"] == "InvalidSpec");
  CHECK(!o.err.empty());
  o = call({"eval", "--family", "werner", "--F", "0.5", "--alpha", "-1"});
  CHECK(o.code == cli::kDomain);
  CHECK(o.doc()["error"]["code"] == "InvalidAlpha");
  const std::string mixed = write_matrix("mixed.json", ComplexMatrix::identity(4) * cplx(0.25), 2, 2);
  o = call({"eval", "--family", "two-qubit", "--matrix-file", mixed, "--alpha", "0.5"});
  CHECK(o.code == cli::kDomain);
  CHECK(o.doc()["error"]["code"] == "AlphaBelowCritical");
  ComplexMatrix neg = ComplexMatrix::identity(4) * cplx(0.5);
  neg(3, 3) = -0.5;
  o = call({"eval", "--family", "two-qubit", "--matrix-file", write_matrix("neg.json", neg, 2, 2), "--alpha", "2"});
  CHECK(o.code == cli::kDomain);
  CHECK(o.doc()["error"]["code"] == "NotPSD");
}

TEST_CASE("matrix file parsing") {
  const auto code = [](const std::string& path) {
    return call({"eval", "--family", "two-qubit", "--matrix-file", path, "--alpha", "2"});
  };
  auto o = code(scratch("missing.json").string());
  CHECK(o.code == cli::kFileParse);
  CHECK(o.doc()["error"]["code"] == "FileParse");
  CHECK(code(write_file("garbage.json", "{not json")).code == cli::kFileParse);
  CHECK(code(write_file("nodims.json", R"({"re": [[1]]})")).code == cli::kFileParse);
  CHECK(code(write_file("shape.json", R"({"dimA": 2, "dimB": 2, "re": [[1, 0], [0, 0]]})")).code == cli::kFileParse);
  CHECK(code(write_file("type.json", R"({"dimA": 2, "dimB": 2, "re": "abc"})")).code == cli::kFileParse);
  // im may be omitted for a real matrix
  o = code(write_file("real.json", R"({"dimA": 2, "dimB": 2,
      "re": [[0.5, 0, 0, 0.5], [0, 0, 0, 0], [0, 0, 0, 0], [0.5, 0, 0, 0.5]]})"));
  REQUIRE(o.code == cli::kOk);
  CHECK(value(o) == doctest::Approx(1.0).epsilon(1e-9));
  const DensityMatrix rho = cli::load_matrix_file(scratch("real.json").string());
  CHECK(rho.dim_a() == 2);
  CHECK(std::abs(rho.matrix()(0, 3) - cplx(0.5)) < 1e-15);
}

TEST_CASE("curve crossings") {
  auto o = call({"curve", "--series", "werner:F=0.8", "--series", "pure:C=0.5", "--find-crossing"});
  REQUIRE(o.code == cli::kOk);
  json d = o.doc();
  REQUIRE(d["crossings"].size() == 1);
  const double x = d["crossings"][0].get<double>();
  CHECK(x > 0.0);
  CHECK(x < 1.0);
  const auto& rows = d["rows"];
  CHECK(rows.size() == 200);
  CHECK(rows.front()[0].get<double>() == 0.01);
  CHECK(rows.back()[0].get<double>() == 1.0);
  CHECK(rows.back()[1].get<double>() == doctest::Approx(0.72193).epsilon(1e-5));
  CHECK(rows.back()[2].get<double>() == doctest::Approx(0.35459).epsilon(1e-5));
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][0].get<double>() > rows[i - 1][0].get<double>());

  o = call({"curve", "--series", "werner:F=0.8", "--concurrence", "0.5", "--alpha-min", "0.05", "--points", "2"});
  REQUIRE(o.code == cli::kOk);
  d = o.doc();
  CHECK(d["rows"][0][1].get<double>() < d["rows"][0][2].get<double>());

  o = call({"curve", "--series", "iso:F=0.9,d=2", "--series", "iso:F=0.7,d=3", "--find-crossing"});
  REQUIRE(o.code == cli::kOk);
  CHECK(o.doc()["crossings"].size() == 1);

  o = call({"curve", "--series", "iso:F=0.7,d=3", "--series", "iso:F=0.7,d=3", "--find-crossing"});
  REQUIRE(o.code == cli::kOk);
  CHECK(o.doc()["crossings"].empty());
  CHECK(call({"curve", "--series", "iso:F=0.7,d=3", "--find-crossing"}).code == cli::kUsage);
}

TEST_CASE("curve over F and CSV") {
  auto o = call({"--format", "csv", "curve", "--axis", "F", "--series", "werner:alpha=0.3", "--series",
                 "iso:alpha=1,d=3", "--points", "11", "--x-min", "0", "--x-max", "1"});
  REQUIRE(o.code == cli::kOk);
  std::istringstream in(o.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "F,werner:alpha=0.3,\"iso:alpha=1,d=3\"");
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    CHECK(std::count(line.begin(), line.end(), ',') == 2);
  }
  CHECK(n == 11);
}

TEST_CASE("helpers") {
  const auto g = cli::log_grid(0.01, 1.0, 200);
  CHECK(g.size() == 200);
  CHECK(g.front() == 0.01);
  CHECK(g.back() == 1.0);
  CHECK(g[100] / g[99] == doctest::Approx(g[1] / g[0]));
  const auto c = cli::find_crossings([](double x) { return (x - 0.3) * (x - 0.7); }, cli::log_grid(0.01, 1, 50));
  REQUIRE(c.size() == 2);
  CHECK(std::abs(c[0] - 0.3) < 1e-8);
  CHECK(std::abs(c[1] - 0.7) < 1e-8);
  CHECK(cli::find_crossings([](double) { return 0.0; }, g).empty());
  CHECK(cli::find_crossings([](double x) { return (x - 0.5) * (x - 0.5); }, g).empty());

  const auto s = cli::parse_series("iso:F=0.7,d=3");
  CHECK(s.kind == cli::SeriesKind::Isotropic);
  CHECK(s.d == 3);
  CHECK(s.param == 0.7);
  CHECK(cli::parse_series("werner:F=0.8").d == 2);
  CHECK(*cli::parse_series("pure:alpha=0.5").alpha == 0.5);
  CHECK(cli::parse_series("iso:F=0.7").d == 2);
  CHECK_THROWS_AS(cli::parse_series("iso:G=0.7"), cli::UsageError);
  CHECK_THROWS_AS(cli::parse_series("werner"), cli::UsageError);
  CHECK_THROWS_AS(cli::parse_series("qutrit:F=0.7"), cli::UsageError);
  CHECK_THROWS_AS(cli::parse_series("werner:F=abc"), cli::UsageError);
}

TEST_CASE("log base") {
  const std::vector<std::string> a{"eval", "--family", "isotropic", "--d", "3", "--F", "0.85", "--alpha", "0.6"};
  const std::vector<std::string> b{"eval", "--family", "pure", "--concurrence", "0.4", "--alpha", "0.6"};
  const auto with = [](std::string base, std::vector<std::string> args) {
    args.insert(args.begin(), {"--log-base", base});
    return value(call(args));
  };
  const double a2 = with("2", a), ae = with("e", a), b2 = with("2", b), be = with("e", b);
  CHECK(ae == doctest::Approx(a2 * std::log(2.0)).epsilon(1e-14));
  CHECK(ae / be == doctest::Approx(a2 / b2).epsilon(1e-14));

  setenv("ERAE_LOG_BASE", "e", 1);
  CHECK(value(call(a)) == doctest::Approx(ae).epsilon(1e-15));
  CHECK(with("2", a) == doctest::Approx(a2).epsilon(1e-15));
  auto o = call({"curve", "--series", "werner:F=0.8", "--points", "3"});
  CHECK(o.doc()["log_base"] == "e");
  CHECK(o.doc()["rows"][2][1].get<double>() == doctest::Approx(0.72192809488736231 * std::log(2.0)));
  setenv("ERAE_LOG_BASE", "7", 1);
  CHECK(call(a).code == cli::kUsage);
  unsetenv("ERAE_LOG_BASE");
}

TEST_CASE("oracle command") {
  auto o = call({"oracle", "--family", "werner", "--d", "2", "--F", "0.8", "--alpha", "2", "--seed", "7"});
  REQUIRE(o.code == cli::kOk);
  CHECK(std::abs(value(o) - 0.55639) < 1e-4);
  CHECK(o.doc()["converged"] == true);

  const std::vector<std::string> args{"oracle", "--family", "isotropic", "--d", "2", "--F", "0.9",
                                      "--alpha", "1.5", "--restarts", "1", "--seed", "7", "--emit-ensemble"};
  const Outcome first = call(args);
  const Outcome second = call(args);
  REQUIRE(first.code == cli::kOk);
  CHECK(first.out == second.out);
  // emitted ensemble reconstructs the state
  EnsembleDecomposition e{2, 2, {}, {}};
  const json emitted = first.doc();
  for (const auto& m : emitted["ensemble"]) {
    e.weights.push_back(m["weight"]);
    StateVector v;
    for (std::size_t i = 0; i < 4; ++i) v.push_back({m["re"][i].get<double>(), m["im"][i].get<double>()});
    e.states.push_back(v);
  }
  const auto direct = call({"eval", "--family", "isotropic", "--d", "2", "--F", "0.9", "--alpha", "1.5"});
  CHECK(roof_value_of(e, Alpha::of(1.5)) == doctest::Approx(value(first)).epsilon(1e-10));
  CHECK(value(first) >= value(direct) - 1e-6);

  std::mt19937_64 rng(41);
  const StateVector psi = random_pure_state(4, rng);
  const std::string file = write_matrix("pure.json", ComplexMatrix::outer(psi), 2, 2);
  const double ev = value(call({"eval", "--family", "two-qubit", "--matrix-file", file, "--alpha", "2"}));
  const double orc = value(call({"oracle", "--matrix-file", file, "--alpha", "2", "--restarts", "1"}));
  CHECK(orc == doctest::Approx(ev).epsilon(1e-8));

  CHECK(call({"oracle", "--alpha", "2"}).code == cli::kUsage);
  CHECK(call({"oracle", "--matrix-file", scratch("missing.json").string(), "--alpha", "2"}).code == cli::kFileParse);
}

TEST_CASE("verify") {
  auto o = call({"verify", "--suite", "alpha-critical"});
  REQUIRE(o.code == cli::kOk);
  const json d = o.doc();
  CHECK(d["passed"] == true);
  CHECK(d["suites"][0]["notes"][0].get<std::string>().find("0.8228756555") != std::string::npos);
  o = call({"verify", "--suite", "iso-eof-d3", "--suite", "twirl", "--suite", "werner-alpha0"});
  CHECK(o.code == cli::kOk);
  CHECK(o.doc()["suites"].size() == 3);
}
