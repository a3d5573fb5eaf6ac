#include <gtest/gtest.h>
#include "json.hpp"

#include <array>
#include <cstdio>
#include <string>
#include <sys/wait.h>

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + QFRAC_CLI + " " + args + " 2>&1";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string data(const std::string& name) { return std::string(QFRAC_DATA_DIR) + "/" + name; }

bool contains(const std::string& s, const std::string& what) {
  return s.find(what) != std::string::npos;
}

}  // namespace

TEST(Cli, ExampleReportsUnattainedZero) {
  const CliRun r = run("examples ex4_1");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(contains(r.out, "unattained")) << r.out;
  EXPECT_TRUE(contains(r.out, "matches expectation")) << r.out;
}

TEST(Cli, WholeCorpusMatches) {
  const CliRun r = run("examples");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_FALSE(contains(r.out, "MISMATCH")) << r.out;
}

TEST(Cli, MissingFileIsInputError) {
  const CliRun r = run("solve " + data("missing.json"));
  EXPECT_EQ(r.code, 2) << r.out;
}

TEST(Cli, CheckReportsViolatedAssumption) {
  const CliRun r = run("check " + data("ex3_3.json") + " --assumption b");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(contains(r.out, "fails")) << r.out;
}

TEST(Cli, UnknownSubcommandOrFlagPrintsUsage) {
  CliRun r = run("frobnicate");
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(contains(r.out, "Usage")) << r.out;
  r = run("solve " + data("ex3_3.json") + " --nope");
  EXPECT_EQ(r.code, 2);
  r = run("check " + data("ex3_3.json") + " --assumption z");
  EXPECT_EQ(r.code, 2);
}

TEST(Cli, SolveJsonParses) {
  const CliRun r = run("solve " + data("ex3_2.json") + " --json");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["lambda_star"].get<double>(), 0.0, 1e-6);
  EXPECT_EQ(j["case"], "lower_boundary_case2");
  EXPECT_EQ(j["tolerance"], 1e-8);
  EXPECT_TRUE(j.contains("version"));
  EXPECT_TRUE(j.contains("wall_time_s"));
}

TEST(Cli, ToleranceFromEnvironmentAndFlag) {
  CliRun r = run("solve " + data("ex3_2.json") + " --json", "QFRAC_TOL=1e-6");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(nlohmann::json::parse(r.out)["tolerance"], 1e-6);
  r = run("solve " + data("ex3_2.json") + " --json --tol 1e-7", "QFRAC_TOL=1e-6");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(nlohmann::json::parse(r.out)["tolerance"], 1e-7);
}

TEST(Cli, OracleValue) {
  const CliRun r = run("oracle " + data("ex3_3.json") + " --grid 101 --box 2");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(contains(r.out, "grid infimum = -1")) << r.out;
}

TEST(Cli, BatchOutputIsSortedByName) {
  const CliRun r = run("batch " + std::string(QFRAC_DATA_DIR));
  EXPECT_EQ(r.code, 0) << r.out;
  std::size_t last = 0;
  for (const char* name : {"ex3_1", "ex3_2", "ex3_3", "ex4_1", "ex5_1", "ex5_2", "rem3_4"}) {
    const std::size_t at = r.out.find(name);
    ASSERT_NE(at, std::string::npos) << name;
    EXPECT_GE(at, last) << name;
    last = at;
  }
  const CliRun j = run("batch " + std::string(QFRAC_DATA_DIR) + " --json");
  EXPECT_EQ(nlohmann::json::parse(j.out).size(), 7u);
}

TEST(Cli, EmitRoundTripsThroughSolve) {
  const CliRun e = run("examples rem3_4 --emit");
  ASSERT_EQ(e.code, 0);
  const std::string path = ::testing::TempDir() + "rem3_4_emitted.json";
  FILE* f = std::fopen(path.c_str(), "w");
  std::fputs(e.out.c_str(), f);
  std::fclose(f);
  const CliRun r = run("solve " + path);
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(contains(r.out, "lambda* = 1")) << r.out;
}
