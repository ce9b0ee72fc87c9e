#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cli_app.hpp"

namespace balbench {
namespace {

namespace fs = std::filesystem;

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("balbench_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, SimulatePidWritesCsv) {
  const auto r =
      cli({"simulate", "--controller", "pid", "--kp", "50", "--ki", "0.8", "--kd", "0.05", "--out", path("pid.csv")});
  EXPECT_EQ(r.code, 0) << r.err;
  const std::string csv = slurp(path("pid.csv"));
  EXPECT_EQ(csv.rfind("t,pitch,pitch_rate,u\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 10002);
  EXPECT_NE(r.err.find("m=0.2"), std::string::npos);
}

TEST_F(CliTest, SimulateLqrAndFuzzy) {
  EXPECT_EQ(cli({"simulate", "--controller", "lqr", "--out", path("lqr.csv")}).code, 0);
  EXPECT_EQ(cli({"simulate", "--controller", "fuzzy-pd", "--out", path("fpd.csv")}).code, 0);
  EXPECT_EQ(cli({"simulate", "--controller", "fuzzy-pdi", "--out", path("fpdi.csv")}).code, 0);
}

TEST_F(CliTest, SimulateDivergenceExitsTwo) {
  const auto r = cli({"simulate", "--controller", "none", "--initial-pitch", "0.01", "--out", path("ol.csv")});
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(fs::exists(path("ol.csv")));
}

TEST_F(CliTest, SimulateConfigErrors) {
  EXPECT_EQ(cli({"simulate", "--controller", "pid"}).code, 1);
  EXPECT_EQ(cli({"simulate", "--controller", "bogus", "--out", path("x.csv")}).code, 1);
  EXPECT_EQ(cli({"simulate", "--controller", "pid", "--kp", "-1", "--out", path("x.csv")}).code, 1);
  EXPECT_EQ(cli({"simulate", "--controller", "lqr", "--r", "0", "--out", path("x.csv")}).code, 1);
  EXPECT_EQ(cli({"simulate", "--controller", "pid", "--dt", "0", "--out", path("x.csv")}).code, 1);
  EXPECT_EQ(cli({"simulate", "--controller", "pid", "--mass-m", "-0.1", "--out", path("x.csv")}).code, 1);
  EXPECT_EQ(cli({"simulate", "--controller", "pid", "--bogus-flag", "--out", path("x.csv")}).code, 1);
  EXPECT_EQ(cli({}).code, 1);
}

TEST_F(CliTest, LqrGainDoubleIntegrator) {
  const auto r = cli({"lqr-gain", "--a21", "0", "--b2", "1", "--q11", "1", "--q22", "1", "--r", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("k1 = 1\n"), std::string::npos);
  EXPECT_NE(r.out.find("k2 = 1.732050807568877"), std::string::npos);
  EXPECT_NE(r.out.find("verdict = Hurwitz"), std::string::npos);
}

TEST_F(CliTest, LqrGainDefaultsAndErrors) {
  const auto r = cli({"lqr-gain"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("k1 = 102.735334"), std::string::npos) << r.out;
  EXPECT_EQ(cli({"lqr-gain", "--r", "0"}).code, 1);
  // Uncontrollable pair: B = 0 with an unstable A.
  EXPECT_EQ(cli({"lqr-gain", "--b2", "0"}).code, 3);
}

TEST_F(CliTest, FuzzyEval) {
  const auto zero = cli({"fuzzy-eval", "--error", "0", "--error-rate", "0"});
  ASSERT_EQ(zero.code, 0);
  EXPECT_NE(zero.out.find("u = 0\n"), std::string::npos) << zero.out;
  const auto full = cli({"fuzzy-eval", "--error", "0.5", "--error-rate", "2"});
  ASSERT_EQ(full.code, 0);
  EXPECT_NE(full.out.find("-> HP strength 1"), std::string::npos);
  EXPECT_NE(full.out.find("u = 16.67"), std::string::npos);
}

TEST_F(CliTest, FuzzyEvalCustomAndBadRuleBase) {
  {
    std::ofstream f(path("zero.rules"));
    for (int i = 0; i < 5; ++i) f << "Z Z Z Z Z\n";
  }
  const auto r = cli({"fuzzy-eval", "--error", "0.5", "--error-rate", "2", "--rulebase", path("zero.rules")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("u = 0\n"), std::string::npos);
  {
    std::ofstream f(path("short.rules"));
    for (int i = 0; i < 4; ++i) f << "Z Z Z Z Z\n";
  }
  EXPECT_EQ(cli({"fuzzy-eval", "--error", "0", "--error-rate", "0", "--rulebase", path("short.rules")}).code, 1);
  EXPECT_EQ(cli({"fuzzy-eval", "--error", "0"}).code, 1);
}

TEST_F(CliTest, CompareRanksFiles) {
  ASSERT_EQ(
      cli({"simulate", "--controller", "lqr", "--plant", "linear", "--t-final", "20", "--out", path("lqr.csv")}).code,
      0);
  ASSERT_EQ(cli({"simulate", "--controller", "fuzzy-pd", "--out", path("fuzzy.csv")}).code, 0);
  ASSERT_EQ(cli({"simulate", "--controller", "none", "--out", path("open.csv")}).code, 2);
  const auto r = cli({"compare", path("open.csv"), path("fuzzy.csv"), path("lqr.csv"), "--csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lqr = r.out.find("1,lqr,stable,");
  const auto fuzzy = r.out.find(",fuzzy,unstable,");
  const auto open = r.out.find(",open,unstable,");
  ASSERT_NE(lqr, std::string::npos) << r.out;
  ASSERT_NE(fuzzy, std::string::npos) << r.out;
  ASSERT_NE(open, std::string::npos) << r.out;
  EXPECT_LT(fuzzy, open);
  EXPECT_EQ(cli({"compare", path("missing.csv")}).code, 1);
  EXPECT_EQ(cli({"compare"}).code, 1);
}

TEST_F(CliTest, PaperSuiteWritesAllArtifacts) {
  const auto r = cli({"paper-suite", "--outdir", path("suite")});
  // Analytically stable configurations that do not settle within 10 s yield 2.
  EXPECT_EQ(r.code, 2) << r.err;
  std::size_t csvs = 0;
  for (const auto& e : fs::directory_iterator(path("suite"))) csvs += e.path().extension() == ".csv";
  EXPECT_EQ(csvs, 8u);
  EXPECT_EQ(slurp(fs::path(path("suite")) / "report.txt"), r.out);
  EXPECT_NE(r.err.find("m=0.2"), std::string::npos);
}

TEST_F(CliTest, PaperSuiteRankingRegression) {
  const auto r = cli({"paper-suite", "--outdir", path("suite")});
  const std::vector<std::string> order{"lqr-q1-r1 ",
                                       "pid-kp100-ki0.8-kd0.1 ",
                                       "pid-kp25-ki0.8-kd0.1 ",
                                       "pid-kp50-ki0.8-kd0.05 ",
                                       "fuzzy-pd ",
                                       "fuzzy-pdi ",
                                       "lqr-q2-r2 ",
                                       "pid-kp1000-ki0.8-kd0.05 "};
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  for (std::size_t i = 0; i < order.size(); ++i) {
    ASSERT_TRUE(std::getline(lines, line));
    EXPECT_EQ(line.rfind(std::to_string(i + 1), 0), 0u) << line;
    EXPECT_NE(line.find(" " + order[i]), std::string::npos) << line;
    EXPECT_NE(line.find(i < 4 ? "marginal" : "unstable"), std::string::npos) << line;
  }
}

TEST_F(CliTest, PaperSuiteIsReproducible) {
  cli({"paper-suite", "--outdir", path("a")});
  cli({"paper-suite", "--outdir", path("b")});
  for (const auto& e : fs::directory_iterator(path("a")))
    EXPECT_EQ(slurp(e.path()), slurp(fs::path(path("b")) / e.path().filename())) << e.path();
}

TEST_F(CliTest, PaperSuiteUnwritableOutdir) {
  {
    std::ofstream(path("file")) << "x";
  }
  EXPECT_EQ(cli({"paper-suite", "--outdir", path("file") + "/sub"}).code, 1);
}

}  // namespace
}  // namespace balbench
