#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "ncfock/cli.hpp"
#include "ncfock/fock.hpp"
#include "ncfock/report.hpp"

using namespace ncfock;
using nlohmann::json;

namespace {

struct ProcessRun {
  int status = -1;
  std::string out;
};

ProcessRun run_cli(const std::string& args) {
  std::string cmd = std::string(NCFOCK_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  ProcessRun r;
  if (!pipe) return r;
  char buf[4096];
  std::size_t got = 0;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

JobSpec job(const std::string& command, std::vector<std::string> inputs, int d, int n) {
  JobSpec s;
  s.command = command;
  s.inputs = std::move(inputs);
  s.d = d;
  s.N = n;
  return s;
}

json results_of(const JobResult& r) {
  EXPECT_EQ(r.exit_code, 0) << r.error;
  return json::parse(r.report).at("results");
}

cplx coefficient(const json& symbol, const Word& word, int row = 0, int col = 0) {
  for (const json& t : symbol.at("terms")) {
    if (t.at("word").get<Word>() == word) {
      const json& e = t.at("matrix")[row][col];
      return {e[0].get<double>(), e[1].get<double>()};
    }
  }
  return 0.0;
}

std::filesystem::path temp_dir() {
  auto dir = std::filesystem::temp_directory_path() / "ncfock_cli_test";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST(CliMeet, ZAndZSquaredGivesScaledZSquared) {
  json res = results_of(run_job(job("meet", {"z1", "z1*z1"}, 1, 6)));
  const json& h = res.at("meet").at("symbol");
  EXPECT_EQ(h.at("terms").size(), 1u);
  EXPECT_NEAR(std::abs(coefficient(h, {1, 1}) + 1.0 / std::sqrt(2.0)), 0.0, 1e-12);
  for (const char* key : {"range_residual", "gram_residual", "stacked_residual", "kernel_residual",
                          "gamma_isometry", "stacked_isometry"}) {
    EXPECT_LT(res.at("certificate").at(key).get<double>(), 1e-10) << key;
  }
}

TEST(CliSzego, ScalarPointMatchesGeometricSeries) {
  JobSpec s = job("szego", {}, 2, 20);
  s.Z = "0.3,0.2";
  s.W = "0.1,0.4";
  json res = results_of(run_job(s));
  double value = res.at("value").at("data")[0][0][0].get<double>();
  EXPECT_NEAR(value, 1.0 / (1.0 - 0.11), 1e-10);
  EXPECT_EQ(res.at("value").at("data")[0][0][1].get<double>(), 0.0);
}

TEST(CliAxioms, MonomialTripleAllPass) {
  json res = results_of(run_job(job("axioms", {"z1", "z2", "z1*z2"}, 2, 5)));
  EXPECT_TRUE(res.at("all_pass").get<bool>());
  EXPECT_EQ(res.at("checks").size(), 8u);
  EXPECT_LT(res.at("max_residual").get<double>(), 1e-8);
}

TEST(CliDouglas, FactorsSquareThroughVariable) {
  json res = results_of(run_job(job("douglas", {"z1*z1", "z1"}, 1, 6)));
  EXPECT_TRUE(res.at("range_contained").at("ok").get<bool>());
  const json& h = res.at("factor").at("symbol");
  EXPECT_EQ(coefficient(h, {1}), cplx(1.0));
  EXPECT_EQ(res.at("residual").get<double>(), 0.0);
}

TEST(CliDouglas, MissingContainmentExitsTwo) {
  JobResult r = run_job(job("douglas", {"z1", "z2"}, 2, 4));
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_EQ(json::parse(r.report).at("error").at("type"), "precondition");
}

TEST(CliIdeal, LeadingLetterCases) {
  json same = results_of(run_job(job("ideal", {"z1*z1", "z1"}, 1, 5)));
  EXPECT_TRUE(same.at("ideal_contained").get<bool>());
  EXPECT_TRUE(same.at("range_contained").get<bool>());
  json apart = results_of(run_job(job("ideal", {"z1", "z2"}, 2, 4)));
  EXPECT_FALSE(apart.at("ideal_contained").get<bool>());
  EXPECT_FALSE(apart.at("range_contained").get<bool>());
  EXPECT_TRUE(apart.at("implication_holds").get<bool>());
}

TEST(CliEquiv, ScalarMultipleIsEquivalent) {
  json res = results_of(run_job(job("equiv", {"z1", "2*z1"}, 2, 4)));
  EXPECT_TRUE(res.at("equivalent").get<bool>());
  EXPECT_NEAR(std::abs(coefficient(res.at("forward").at("symbol"), {}) - 0.5), 0.0, 1e-12);
  json not_equiv = results_of(run_job(job("equiv", {"z1", "z2"}, 2, 4)));
  EXPECT_FALSE(not_equiv.at("equivalent").get<bool>());
  EXPECT_EQ(not_equiv.at("stage"), "range");
}

TEST(CliJoin, JoinIsBlockRow) {
  json res = results_of(run_job(job("join", {"z1", "z2"}, 2, 3)));
  const json& j = res.at("join").at("symbol");
  EXPECT_EQ(j.at("cols").get<int>(), 2);
  EXPECT_EQ(coefficient(j, {2}, 0, 1), cplx(1.0));
  EXPECT_EQ(res.at("range").at("dim").get<int>(), 14);
}

TEST(CliMult, VariableIsInner) {
  json res = results_of(run_job(job("mult", {"z1"}, 2, 4)));
  EXPECT_TRUE(res.at("inner").at("ok").get<bool>());
  EXPECT_TRUE(res.at("left_multiplier").at("ok").get<bool>());
  EXPECT_EQ(res.at("window_kernel_dim").get<int>(), 0);
  EXPECT_EQ(res.at("operator_norm").get<double>(), 1.0);
}

TEST(CliEval, PolynomialAtScalarPoint) {
  JobSpec s = job("eval", {"1 + 2*z1*z2"}, 2, 4);
  s.Z = "0.3,0.2";
  json res = results_of(run_job(s));
  EXPECT_NEAR(res.at("value").at("data")[0][0][0].get<double>(), 1.12, 1e-15);
}

TEST(CliDilate, NilpotentTupleFromCsv) {
  auto path = temp_dir() / "tuple.csv";
  Mat block = Mat::Zero(2, 4);
  block(0, 1) = 0.5;
  block(0, 3) = 0.3;
  write_matrix_csv_file(path.string(), block);
  JobSpec s = job("dilate", {path.string()}, 2, 3);
  json res = results_of(run_job(s));
  EXPECT_TRUE(res.at("row_contraction").at("ok").get<bool>());
  EXPECT_LT(res.at("poisson_kernel").at("isometry_defect").get<double>(), 1e-12);
  EXPECT_LT(res.at("poisson_kernel").at("intertwining_defect").get<double>(), 1e-12);
  EXPECT_LT(res.at("qr_dilation_comparison").at("embedding_defect").get<double>(), 1e-8);
}

TEST(CliDbb, ShiftInvariantSpanRecoversVariable) {
  auto dir = temp_dir();
  Mat basis = Mat::Zero(3, 2);
  basis(1, 0) = 1.0;
  basis(2, 1) = 1.0;
  write_matrix_csv_file((dir / "basis.csv").string(), basis);
  write_matrix_csv_file((dir / "gram.csv").string(), Mat::Identity(2, 2));
  JobSpec s = job("dbb", {(dir / "basis.csv").string(), (dir / "gram.csv").string()}, 1, 2);
  json res = results_of(run_job(s));
  EXPECT_NEAR(std::abs(coefficient(res.at("symbol").at("symbol"), {1})), 1.0, 1e-12);
  EXPECT_NEAR(res.at("embedding_norm").get<double>(), res.at("symbol_norm").get<double>(), 1e-12);
}

TEST(CliInputs, JsonSymbolFileMatchesExpression) {
  auto path = temp_dir() / "square.json";
  {
    std::ofstream f(path);
    f << to_json(parse_ncpoly("z1*z1", 1));
  }
  JobResult from_file = run_job(job("meet", {"z1", path.string()}, 1, 6));
  JobResult from_text = run_job(job("meet", {"z1", "z1*z1"}, 1, 6));
  ASSERT_EQ(from_file.exit_code, 0) << from_file.error;
  EXPECT_EQ(json::parse(from_file.report).at("results"), json::parse(from_text.report).at("results"));
}

TEST(CliErrors, ParseErrorReportsPosition) {
  JobResult r = run_job(job("meet", {"z1", "z1*("}, 1, 6));
  EXPECT_EQ(r.exit_code, 2);
  json e = json::parse(r.report).at("error");
  EXPECT_EQ(e.at("type"), "parse");
  EXPECT_EQ(e.at("position").get<int>(), 4);
}

TEST(CliErrors, GuardsAndRanges) {
  EXPECT_EQ(run_job(job("mult", {"z1"}, 3, 12)).exit_code, 2);
  EXPECT_EQ(run_job(job("mult", {"z1"}, 2, 13)).exit_code, 2);
  EXPECT_EQ(run_job(job("mult", {"z1"}, 10, 2)).exit_code, 2);
  EXPECT_EQ(run_job(job("mult", {"z1*z1*z1"}, 1, 2)).exit_code, 2);
  EXPECT_EQ(run_job(job("frobnicate", {}, 1, 2)).exit_code, 2);
  EXPECT_EQ(run_job(job("meet", {"z1"}, 1, 2)).exit_code, 2);
}

TEST(CliProcess, ExitCodesAndOutput) {
  ProcessRun ok = run_cli("meet --d 1 --N 6 z1 'z1*z1'");
  EXPECT_EQ(ok.status, 0);
  EXPECT_EQ(json::parse(ok.out).at("schema"), "ncfock/1");
  EXPECT_EQ(run_cli("meet --d 1 --N 6 z1 'z1*('").status, 2);
  EXPECT_EQ(run_cli("meet --bogus 1 z1 z1").status, 2);
  EXPECT_EQ(run_cli("meet --d x z1 z1").status, 2);
}

TEST(CliProcess, MatrixLiteralsStayWhole) {
  ProcessRun r = run_cli("join --d 2 --N 3 '[[z1, z2*z1]]' '[[z2]]'");
  ASSERT_EQ(r.status, 0);
  json report = json::parse(r.out);
  EXPECT_EQ(report.at("arguments"), json({"[[z1, z2*z1]]", "[[z2]]"}));
  EXPECT_EQ(report.at("results").at("join").at("symbol").at("cols"), 3);
  EXPECT_EQ(r.out, run_job(job("join", {"[[z1, z2*z1]]", "[[z2]]"}, 2, 3)).report);
}

TEST(CliProcess, OutFileHoldsReport) {
  auto path = temp_dir() / "report.json";
  std::filesystem::remove(path);
  ProcessRun r = run_cli("axioms --d 2 --N 4 z1 z2 'z1*z2' --out " + path.string());
  EXPECT_EQ(r.status, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream f(path);
  std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  EXPECT_EQ(text, run_job(job("axioms", {"z1", "z2", "z1*z2"}, 2, 4)).report);
}

TEST(CliProcess, RepeatedRunsAreByteIdentical) {
  for (const char* args : {"meet --d 1 --N 6 z1 'z1*z1'", "szego --d 2 --N 20 --Z 0.3,0.2 --W 0.1,0.4",
                           "equiv --d 2 --N 4 'z1 + z2' '2*z1 + 2*z2'"}) {
    ProcessRun a = run_cli(args);
    ProcessRun b = run_cli(args);
    EXPECT_EQ(a.status, 0) << args;
    EXPECT_EQ(a.out, b.out) << args;
  }
}

TEST(Report, NumbersUseSeventeenDigits) {
  Report r;
  r["x"] = 1.0 / std::sqrt(2.0);
  r["zero"] = -0.0;
  r["big"] = std::numeric_limits<double>::infinity();
  r["count"] = 3;
  std::string text = dump_report(r);
  EXPECT_NE(text.find("0.70710678118654746"), std::string::npos);
  EXPECT_NE(text.find("\"zero\": 0.0"), std::string::npos);
  EXPECT_NE(text.find("\"big\": \"inf\""), std::string::npos);
  EXPECT_NE(text.find("\"count\": 3\n"), std::string::npos);
  EXPECT_EQ(json::parse(text).at("x").get<double>(), 1.0 / std::sqrt(2.0));
}
