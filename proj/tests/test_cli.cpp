#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "hyflow/cli/commands.hpp"
#include "hyflow/cli/output.hpp"
#include "hyflow/cli/serialize.hpp"
#include "hyflow/cli/spec.hpp"
#include "hyflow/error.hpp"
#include "hyflow/weak_verify.hpp"
#include "oracles.hpp"

using namespace hyflow;
using namespace hyflow::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const char* root = std::getenv("HYFLOW_TEST_TMP");
  fs::path dir = fs::path(root ? root : fs::temp_directory_path().string()) / ("cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path write_spec(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "spec.json";
  std::ofstream(p) << text;
  return p;
}

const char* kSqrtP2 = R"({"problem": "p2", "ramp": {"kind": "power", "coeff": 1, "exp": 0.5},
  "x_star": 2, "p_bar": 0.5})";

struct Invocation {
  int code;
  std::string out, err;
};

Invocation run(int (*cmd)(const CommandOptions&, std::ostream&, std::ostream&), const CommandOptions& o) {
  std::ostringstream out, err;
  const int code = cmd(o, out, err);
  return {code, out.str(), err.str()};
}

CommandOptions options(const fs::path& spec, const fs::path& out) {
  CommandOptions o;
  o.spec_path = spec.string();
  o.out_dir = out.string();
  return o;
}

}  // namespace

TEST(Spec, SyntaxErrorCarriesLineAndColumn) {
  try {
    parse_spec("{\n  \"problem\": \"p1\",\n  \"ramp\": ,\n}");
    FAIL();
  } catch (const SpecError& e) {
    EXPECT_NE(std::string(e.what()).find(":3:"), std::string::npos) << e.what();
  }
}

TEST(Spec, SchemaErrorsCarryPointer) {
  auto message = [](const std::string& text) {
    try {
      parse_spec(text);
    } catch (const SpecError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(message(R"({"problem": "p4", "ramp": {"kind": "wedge", "slope": 1}})").find("/problem"),
            std::string::npos);
  EXPECT_NE(message(R"({"problem": "p1", "ramp": {"kind": "wedge", "slope": 1}, "bogus": 1})")
                .find("bogus"),
            std::string::npos);
  EXPECT_NE(message(R"({"problem": "p3", "ramp": {"kind": "power", "coeff": 1, "exp": 0.5},
                        "x_star": 2, "jet": {"rho": 1, "u": 1}})")
                .find("/jet"),
            std::string::npos);
  EXPECT_NE(message(R"({"problem": "p2", "ramp": {"kind": "wedge", "slope": 1, "x_end": 1},
                        "x_star": 2, "p_bar": 0.5})")
                .find("x_star"),
            std::string::npos);
}

TEST(Spec, RampKindsAndOverrides) {
  auto s = parse_spec(R"({"problem": "p1", "ramp": {"kind": "wedge", "angle_deg": 30}})");
  EXPECT_NEAR(s.ramp.slope(), std::tan(std::numbers::pi / 6), 1e-15);
  EXPECT_EQ(s.effective_x_max(), 10.0);
  s = parse_spec(kSqrtP2);
  EXPECT_EQ(s.effective_x_max(), 10.0);
  apply_overrides(s, {12.0, 1e-9});
  EXPECT_EQ(s.effective_x_max(), 12.0);
  EXPECT_EQ(s.tol, 1e-9);
  EXPECT_THROW(apply_overrides(s, {1.0, std::nullopt}), SpecError);
  s = parse_spec(R"({"problem": "p1", "ramp": {"kind": "polynomial", "coeffs": [0, 0.5, 0.1]}})");
  EXPECT_EQ(s.ramp.kind(), RampProfile::Kind::Polynomial);
  s = parse_spec(R"({"problem": "p1", "ramp": {"kind": "tabulated", "x": [0, 1, 2], "b": [0, 1, 1.5]}})");
  EXPECT_EQ(s.ramp.kind(), RampProfile::Kind::Tabulated);
}

TEST(Spec, TabulatedCsvRelativeToSpec) {
  const auto dir = scratch("csv");
  std::ofstream(dir / "ramp.csv") << "x,b\n0,0\n1,1\n2,1.5\n3,1.8\n";
  const auto spec = load_spec(
      write_spec(dir, R"({"problem": "p1", "ramp": {"kind": "tabulated", "csv": "ramp.csv"}})")
          .string());
  EXPECT_EQ(spec.ramp.x_end(), 3.0);
}

TEST(Grid, ParseAxis) {
  const auto a = parse_grid_axis("p_bar=0:2:0.5");
  EXPECT_EQ(a.pointer, "/p_bar");
  ASSERT_EQ(a.values.size(), 5u);
  EXPECT_EQ(a.values.back(), 2.0);
  EXPECT_EQ(parse_grid_axis("v_bar=0.1:0.5:0.1").pointer, "/jet/v");
  EXPECT_EQ(parse_grid_axis("p_bar=1:0:0.1").values.size(), 0u);
  EXPECT_THROW(parse_grid_axis("p_bar=0:1:0"), SpecError);
  EXPECT_EQ(parse_grid_axis("ramp.exp=0.4:0.6:0.1").pointer, "/ramp/exp");
  EXPECT_THROW(parse_grid_axis("p-bar!=0:1:0.1"), SpecError);
  EXPECT_THROW(parse_grid_axis("p_bar"), SpecError);
}

TEST(Serialize, NumbersAndRoundTrip) {
  EXPECT_EQ(number_json(kInfinity), "inf");
  EXPECT_EQ(number_from_json(nlohmann::json("-inf"), "x"), -kInfinity);
  EXPECT_TRUE(std::isnan(number_from_json(nlohmann::json(nullptr), "x")));
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");

  const auto spec = parse_spec(kSqrtP2);
  const auto sol = solve(spec);
  const auto doc = solution_to_json(sol, 801);
  const auto back = solution_from_json(nlohmann::json::parse(doc.dump()));
  EXPECT_EQ(back.curves.size(), sol.curves.size());
  EXPECT_EQ(back.regions.size(), sol.regions.size());
  const auto* layer = back.find_curve("layer");
  ASSERT_NE(layer, nullptr);
  for (double x : {2.5, 4.0, 9.0}) {
    const auto a = layer->sample(x);
    EXPECT_NEAR(a.y, oracles::sqrt_ramp::layer_phalf(x), 1e-9);
  }
  EXPECT_LE(radon_nikodym_check(back).curve_deviation, 1e-8);
}

TEST(Commands, SolveWritesOutputsDeterministically) {
  const auto dir = scratch("solve");
  const auto spec = write_spec(dir, kSqrtP2);
  const Invocation a = run(run_solve, options(spec, dir / "a"));
  const Invocation b = run(run_solve, options(spec, dir / "b"));
  ASSERT_EQ(a.code, kOk) << a.err;
  ASSERT_EQ(b.code, kOk);
  for (const char* f : {"solution.json", "curves.csv", "plot.svg"}) {
    ASSERT_TRUE(fs::exists(dir / "a" / f)) << f;
    EXPECT_EQ(read_file(dir / "a" / f), read_file(dir / "b" / f)) << f;
  }
  const std::string csv = read_file(dir / "a" / "curves.csv");
  EXPECT_EQ(csv.rfind("curve,t,x,y,w_m0,w_m1,w_m2,w_m3,w_n0,w_n1,w_n2,w_n3,w_rho,u,v,E\n", 0), 0u);
  EXPECT_NE(read_file(dir / "a" / "plot.svg").find("<svg"), std::string::npos);
}

TEST(Commands, SolveExitCodes) {
  const auto dir = scratch("codes");
  {
    const auto spec = write_spec(dir, "{ \"problem\": ");
    const Invocation r = run(run_solve, options(spec, dir / "o"));
    EXPECT_EQ(r.code, kInvalidSpec);
    EXPECT_NE(r.err.find(":1:"), std::string::npos) << r.err;
  }
  {
    const auto spec = write_spec(dir, R"({"problem": "p1", "ramp": {"kind": "wedge", "slope": 0}})");
    EXPECT_EQ(run(run_solve, options(spec, dir / "o")).code, kInadmissible);
  }
  {
    const auto spec = write_spec(dir, R"({"problem": "p2", "ramp": {"kind": "power", "coeff": 1,
      "exp": 0.5}, "x_star": 2, "p_bar": 2})");
    const Invocation r = run(run_solve, options(spec, dir / "blow"));
    EXPECT_EQ(r.code, kBlowUp);
    const auto doc = nlohmann::json::parse(read_file(dir / "blow" / "solution.json"));
    EXPECT_NEAR(doc["classification"]["blow_up"][0].get<double>(),
                oracles::sqrt_ramp::terminal_x_p2(), 1e-12);
  }
}

TEST(Commands, VerifySolverOutputAndTamperedFile) {
  const auto dir = scratch("verify");
  const auto spec = write_spec(dir, R"({"problem": "p1", "ramp": {"kind": "wedge", "angle_deg": 30},
    "x_max": 4})");
  ASSERT_EQ(run(run_solve, options(spec, dir)).code, kOk);

  CommandOptions v;
  v.solution_path = (dir / "solution.json").string();
  v.out_dir = (dir / "ok").string();
  v.levels = 4;
  const Invocation ok = run(run_verify, v);
  EXPECT_EQ(ok.code, kOk) << ok.out << ok.err;
  const auto summary = nlohmann::json::parse(read_file(dir / "ok" / "summary.json"));
  EXPECT_TRUE(summary["pass"].get<bool>());

  auto doc = nlohmann::json::parse(read_file(dir / "solution.json"));
  for (auto& w : doc["loads"][0]["samples"]["w_p"])
    if (w.is_number()) w = w.get<double>() * 1.1;
  std::ofstream(dir / "tampered.json") << doc.dump();
  v.solution_path = (dir / "tampered.json").string();
  v.out_dir = (dir / "bad").string();
  const Invocation bad = run(run_verify, v);
  EXPECT_EQ(bad.code, kVerifyFailed);
  EXPECT_NE(bad.out.find("momentum_x"), std::string::npos) << bad.out;

  std::ofstream(dir / "empty.json") << "{}";
  v.solution_path = (dir / "empty.json").string();
  v.out_dir = (dir / "empty").string();
  const Invocation empty = run(run_verify, v);
  EXPECT_EQ(empty.code, kOk);
  EXPECT_NE(empty.err.find("warning"), std::string::npos);
}

TEST(Commands, SweepOverPressure) {
  const auto dir = scratch("sweep");
  auto o = options(write_spec(dir, kSqrtP2), dir);
  o.grid = {"p_bar=0:2:0.1"};
  o.format = "csv";
  const Invocation r = run(run_sweep, o);
  ASSERT_EQ(r.code, kOk) << r.err;
  std::istringstream csv(read_file(dir / "sweep.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line.rfind("index,p_bar,status,kind,regime,blow_up_x", 0), 0u);
  double prev_blow = kInfinity;
  int rows = 0;
  while (std::getline(csv, line)) {
    std::vector<std::string> f;
    std::stringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) f.push_back(c);
    const double p = std::stod(f[1]);
    ++rows;
    if (p <= 1.0 + 1e-12) {
      EXPECT_TRUE(f[5].empty()) << line;
    } else {
      ASSERT_FALSE(f[5].empty()) << line;
      const double x = std::stod(f[5]);
      EXPECT_LT(x, prev_blow);
      prev_blow = x;
    }
  }
  EXPECT_EQ(rows, 21);
}

TEST(Commands, SweepRegimeFlipsAtThreshold) {
  const auto dir = scratch("sweep_jet");
  auto o = options(write_spec(dir, R"({"problem": "p3", "ramp": {"kind": "power", "coeff": 1,
    "exp": 0.5}, "x_star": 2, "jet": {"rho": 1, "u": 1, "v": 0.2}})"),
                   dir);
  o.grid = {"v_bar=0.3:0.4:0.01"};
  o.format = "csv";
  ASSERT_EQ(run(run_sweep, o).code, kOk);
  std::istringstream csv(read_file(dir / "sweep.csv"));
  std::string line;
  std::getline(csv, line);
  const double threshold = oracles::sqrt_ramp::db(2.0);
  while (std::getline(csv, line)) {
    std::vector<std::string> f;
    std::stringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) f.push_back(c);
    const double v = std::stod(f[1]);
    EXPECT_EQ(f[4], v >= threshold ? "Attached" : "VacuumBounded") << line;
  }
}

TEST(Commands, SweepRejectsUnknownKey) {
  const auto dir = scratch("sweep_unknown");
  auto o = options(write_spec(dir, kSqrtP2), dir);
  o.grid = {"nonsense=0:1:0.5"};
  const Invocation r = run(run_sweep, o);
  EXPECT_EQ(r.code, kInvalidSpec);
  EXPECT_NE(r.err.find("/nonsense"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(dir / "sweep.json"));
}

TEST(Commands, EmptySweepIsHeaderOnly) {
  const auto dir = scratch("sweep_empty");
  auto o = options(write_spec(dir, kSqrtP2), dir);
  o.grid = {"p_bar=1:0:0.1"};
  o.format = "csv";
  ASSERT_EQ(run(run_sweep, o).code, kOk);
  const std::string csv = read_file(dir / "sweep.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1);
}

TEST(Commands, OracleSummary) {
  const auto dir = scratch("oracle");
  auto o = options(write_spec(dir, kSqrtP2), dir);
  o.dx = 2e-3;
  const Invocation r = run(run_oracle, o);
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto doc = nlohmann::json::parse(read_file(dir / "oracle.json"));
  EXPECT_TRUE(fs::exists(dir / "oracle_wall.csv"));
  EXPECT_TRUE(fs::exists(dir / "oracle_layer.csv"));
  EXPECT_FALSE(doc.empty());
}
