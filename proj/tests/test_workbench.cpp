#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "nldirac/workbench.hpp"

using namespace nld;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("nld-workbench-" + name);
  fs::remove_all(p);
  return p;
}

// expects a ConfigError at the given 1-based line whose message contains `needle`
void expect_config_error(const std::string& text, int line, const std::string& needle) {
  try {
    parse_config(text, "cfg.yaml");
    ADD_FAILURE() << "no error for:\n" << text;
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), line) << e.what();
    EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
    if (line > 0)
      EXPECT_EQ(std::string(e.what()).rfind("cfg.yaml:" + std::to_string(line) + ":", 0), 0u)
          << e.what();
  }
}

}  // namespace

TEST(Config, ParsesFullSchema) {
  const RunConfig c = parse_config(R"(operation: branch
dimension: 2
cutoff: 12
n_grid: 64
lambda_grid: "0.1:0.3:0.1"
second_near: [1]
seed: 5
threads: 2
guard: false
output: out/b
nonlinearity:
  kind: power
  alpha: 2.0
  p: 3.5
tolerances:
  grad_tol: 1e-8
  fiber_tol: 1e-11
  max_iter: 99
)");
  EXPECT_EQ(c.operation, "branch");
  EXPECT_EQ(c.K, 12);
  EXPECT_EQ(c.n_grid, 64);
  ASSERT_EQ(c.lambdas.size(), 3u);
  EXPECT_DOUBLE_EQ(c.lambdas[2], 0.3);
  EXPECT_EQ(c.second_near, std::vector<int>{1});
  EXPECT_EQ(c.seed, 5u);
  EXPECT_FALSE(c.guard);
  EXPECT_EQ(c.nl.kind, "power");
  EXPECT_DOUBLE_EQ(c.nl.p, 3.5);
  EXPECT_DOUBLE_EQ(c.tol.grad_tol, 1e-8);
  EXPECT_EQ(c.tol.max_iter, 99);
}

TEST(Config, RejectsWithLinePrecision) {
  expect_config_error("operation: solve\nlambda: 0.5\nfoo: 1\n", 3, "unknown key 'foo'");
  expect_config_error("operation: solve\nlambda: 0.5\nnonlinearity:\n  kind: power\n  pp: 3\n", 5,
                      "unknown key 'nonlinearity.pp'");
  expect_config_error("operation: solve\ncutoff: abc\nlambda: 0.5\n", 2, "expected an integer");
  expect_config_error("operation: solve\nlambda: [0.5\n", 3, "");
  // p above 2* = 4 at m = 2 names the bound, pointing at the p key
  expect_config_error("operation: solve\ndimension: 2\nlambda: 0.5\nnonlinearity:\n  kind: power\n  p: 5\n",
                      6, "2* = 4");
  expect_config_error("operation: solve\nlambda: -0.5\n", 2, "(f5)");
  expect_config_error("operation: nonsense\nlambda: 0.5\n", 1, "unknown operation");
  expect_config_error("operation: solve\ncutoff: 4\nn_grid: 7\nlambda: 0.5\n", 3, "n_grid");
  expect_config_error("operation: testspinor\neps_sweep: [0.1, 0.2]\n", 2, "decreasing");
  expect_config_error("operation: branch\n", 0, "");
}

TEST(Config, EmptyAndMissingFile) {
  EXPECT_THROW(parse_config(""), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/cfg.yaml"), ConfigError);
}

TEST(Config, LambdaGrid) {
  const auto g = parse_lambda_grid("0.1:0.99:0.05");
  ASSERT_EQ(g.size(), 19u);
  EXPECT_DOUBLE_EQ(g.front(), 0.1);
  EXPECT_DOUBLE_EQ(g[3], 0.25);
  EXPECT_DOUBLE_EQ(g[17], 0.95);
  EXPECT_DOUBLE_EQ(g.back(), 0.99);
  EXPECT_EQ(parse_lambda_grid("0:1:0.5"), (std::vector<double>{0, 0.5, 1}));
  EXPECT_EQ(parse_lambda_grid("0.7"), std::vector<double>{0.7});
  EXPECT_THROW(parse_lambda_grid("0.1:0.2"), InvalidArgument);
  EXPECT_THROW(parse_lambda_grid("0.1:x:0.1"), InvalidArgument);
  EXPECT_THROW(parse_lambda_grid("0.5:0.1:0.1"), InvalidArgument);
}

TEST(Csv, NumberFormat) {
  EXPECT_EQ(csv_number(0.5), "5.00000000000e-01");
  EXPECT_EQ(csv_number(-0.0), "0.00000000000e+00");
  EXPECT_EQ(csv_number(1.0 / 3.0), "3.33333333333e-01");
  EXPECT_EQ(csv_number(-12345.678), "-1.23456780000e+04");
  EXPECT_EQ(csv_number(std::nan("")), "nan");
  // 12 significant digits
  EXPECT_EQ(std::regex_replace(csv_number(std::sqrt(2.0)), std::regex("[^0-9]"), "").size(), 14u);
}

TEST(Csv, TableQuotingAndWidth) {
  CsvTable t({"a", "b"});
  t.row().add(1.0).add("x,y");
  t.row().add(true).add("q\"r");
  EXPECT_EQ(t.str(), "a,b\n1.00000000000e+00,\"x,y\"\ntrue,\"q\"\"r\"\n");
  CsvTable bad({"a", "b"});
  bad.row().add(1.0);
  EXPECT_THROW(bad.str(), ShapeError);
}

TEST(Run, GoldenSpectrum) {
  RunConfig c;
  c.operation = "spectrum";
  c.K = 2;
  c.output = scratch("spectrum").string();
  const RunResult r = run(c);
  EXPECT_EQ(r.exit_code, kExitOk);
  EXPECT_EQ(slurp(r.dir / "results.csv"), slurp(fs::path(NLD_GOLDEN_DIR) / "spectrum_K2.csv"));
}

TEST(Run, GoldenMultiplicity) {
  RunConfig c;
  c.operation = "multiplicity";
  c.K = 8;
  c.lambdas = {0.0, 0.5, 0.99};
  c.output = scratch("multiplicity").string();
  const RunResult r = run(c);
  EXPECT_EQ(r.exit_code, kExitOk);
  EXPECT_EQ(slurp(r.dir / "results.csv"), slurp(fs::path(NLD_GOLDEN_DIR) / "multiplicity_K8.csv"));
}

TEST(Run, MinimalSolveIsDeterministic) {
  const fs::path dir = scratch("solve");
  fs::create_directories(dir);
  const fs::path cfg = dir / "solve.yaml";
  std::ofstream(cfg) << "operation: solve\ndimension: 2\ncutoff: 8\nlambda: 0.5\noutput: "
                     << (dir / "out").string() << "\nnonlinearity:\n  kind: bnd\n";
  const RunResult a = run_file(cfg.string());
  ASSERT_EQ(a.exit_code, kExitOk) << a.summary;
  const std::string body = slurp(a.dir / "results.csv");
  std::istringstream lines(body);
  std::string header, row, extra;
  std::getline(lines, header);
  std::getline(lines, row);
  EXPECT_FALSE(std::getline(lines, extra));
  EXPECT_EQ(header, "lambda,level,energy,residual,below_gamma_crit,flags");
  const std::regex sci("-?[0-9]\\.[0-9]{11}e[+-][0-9]{2}");
  const std::regex shape("5\\.00000000000e-01,least,(.*),(.*),true,");
  std::smatch m;
  ASSERT_TRUE(std::regex_match(row, m, shape)) << row;
  EXPECT_TRUE(std::regex_match(m[1].str(), sci));
  EXPECT_TRUE(std::regex_match(m[2].str(), sci));
  EXPECT_LE(std::stod(m[1].str()), std::acos(-1.0) * std::acos(-1.0) / 4 + 1e-6);
  EXPECT_TRUE(fs::exists(a.dir / "manifest.json"));
  EXPECT_TRUE(fs::exists(a.dir / "plotdata" / "branch.csv"));
  const std::string manifest = slurp(a.dir / "manifest.json");
  EXPECT_NE(manifest.find("\"operation\": \"solve\""), std::string::npos);
  EXPECT_NE(manifest.find("\"wall_clock_seconds\""), std::string::npos);

  const RunResult b = run_file(cfg.string());
  EXPECT_EQ(slurp(b.dir / "results.csv"), body);
  EXPECT_EQ(slurp(b.dir / "plotdata" / "branch.csv"), slurp(a.dir / "plotdata" / "branch.csv"));
}

TEST(Run, ExitCodes) {
  const fs::path dir = scratch("exit");
  fs::create_directories(dir);
  const fs::path bad = dir / "bad.yaml";
  std::ofstream(bad) << "operation: solve\ndimension: 2\nlambda: 0.5\nnonlinearity:\n  kind: power\n  p: 5\n";
  const RunResult r = run_file(bad.string());
  EXPECT_EQ(r.exit_code, kExitConfig);
  EXPECT_NE(r.summary.find(":6:"), std::string::npos) << r.summary;
  EXPECT_NE(r.summary.find("2* = 4"), std::string::npos) << r.summary;

  // at K = 8 the lambda = 0.1 energy is above gamma_crit
  RunConfig g;
  g.operation = "solve";
  g.K = 8;
  g.lambda = 0.1;
  g.output = (dir / "guard").string();
  const RunResult rg = run(g);
  EXPECT_EQ(rg.exit_code, kExitGuard);
  EXPECT_NE(slurp(rg.dir / "results.csv").find("false,guard-violation"), std::string::npos);
  g.guard = false;
  EXPECT_EQ(run(g).exit_code, kExitOk);

  // window beyond the cutoff is a computation failure with a manifest
  RunConfig mfail;
  mfail.operation = "multiplicity";
  mfail.K = 8;
  mfail.lambda = 7.9;
  mfail.output = (dir / "fail").string();
  const RunResult rf = run(mfail);
  EXPECT_EQ(rf.exit_code, kExitSolver);
  EXPECT_TRUE(fs::exists(rf.dir / "manifest.json"));
  EXPECT_NE(slurp(rf.dir / "manifest.json").find("\"error\""), std::string::npos);
}

TEST(Run, OutputRootFromEnvironment) {
  const fs::path root = scratch("root");
  ::setenv("NLD_OUTPUT_ROOT", root.c_str(), 1);
  EXPECT_EQ(resolve_output("a/b"), root / "a/b");
  EXPECT_EQ(resolve_output("/abs/x"), fs::path("/abs/x"));
  RunConfig c;
  c.operation = "clifford";
  c.m = 3;
  c.output = "cl";
  const RunResult r = run(c);
  ::unsetenv("NLD_OUTPUT_ROOT");
  EXPECT_EQ(r.exit_code, kExitOk);
  EXPECT_TRUE(fs::exists(root / "cl" / "results.csv"));
  EXPECT_EQ(resolve_output("a/b"), fs::path("a/b"));
}

TEST(Run, AcceptSuiteWritesVerdicts) {
  RunConfig c;
  c.operation = "accept";
  c.suite = "clifford";
  c.output = scratch("accept").string();
  const RunResult r = run(c);
  EXPECT_EQ(r.exit_code, kExitOk);
  const std::string csv = slurp(r.dir / "results.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "criterion,check,pass,measured,tolerance,relation");
  EXPECT_NE(slurp(r.dir / "manifest.json").find("\"verdicts\""), std::string::npos);
}

TEST(Accept, SuiteMap) {
  EXPECT_EQ(suite_criteria("all").size(), 11u);
  EXPECT_THROW(suite_criteria("bogus"), InvalidArgument);
  const AcceptReport r = accept("clifford");
  ASSERT_EQ(r.criteria.size(), 1u);
  EXPECT_TRUE(r.all_pass());
  EXPECT_EQ(format_report(r).front().rfind("[PASS] criterion 1", 0), 0u);
}
