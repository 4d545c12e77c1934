#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>
#include <sys/wait.h>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
};

CliResult run(const std::string& args) {
  const std::string cmd = std::string(MISOSEC_CLI) + " " + args + " 2>/dev/null";
  CliResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string fixture(const std::string& name) { return (fs::path(MISOSEC_FIXTURE_DIR) / name).string(); }

}  // namespace

TEST(Cli, SolveSrmReportsRate) {
  const CliResult r = run("solve-srm --instance " + fixture("orthogonal.json") + " --json");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["rate"].get<double>(), 1.0, 1e-6);
  EXPECT_EQ(j["status"], "optimal");
}

TEST(Cli, HumanReadableOutput) {
  const CliResult r = run("solve-srm --instance " + fixture("orthogonal.json"));
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("rate"), std::string::npos);
}

TEST(Cli, InfeasibleSrcExitsTwo) {
  EXPECT_EQ(run("solve-src --instance " + fixture("dominated.json") + " --rate 1").code, 2);
  EXPECT_EQ(run("solve-src --instance " + fixture("orthogonal.json") + " --rate 1").code, 0);
}

TEST(Cli, RobustSubcommands) {
  EXPECT_EQ(run("solve-robust-srm --instance " + fixture("bob_ball.json")).code, 0);
  EXPECT_EQ(run("solve-robust-src --instance " + fixture("bob_ball.json") + " --rate 0.5").code, 0);
  const CliResult r = run("eval-worst-case --instance " + fixture("bob_ball.json") + " --design " +
                    fixture("beam_e1.json") + " --json");
  ASSERT_EQ(r.code, 0);
  EXPECT_NEAR(nlohmann::json::parse(r.out)["worst_case_rate"].get<double>(), 0.32193, 1e-5);
}

TEST(Cli, OracleSubcommand) {
  const CliResult r = run("oracle --instance " + fixture("orthogonal.json") + " --grid 50 --powers 5 --json");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["brute_force_rate"].get<double>(), 1.0, 1e-9);
  EXPECT_NEAR(j["sdp_rate"].get<double>(), 1.0, 1e-6);
}

TEST(Cli, SimulateWritesOneRowPerPointAndMethod) {
  const fs::path out = fs::temp_directory_path() / "misosec_cli_test.csv";
  fs::remove(out);
  ASSERT_EQ(run("simulate --config " + fixture("fig2a.json") + " --out " + out.string()).code, 0);
  std::ifstream in(out);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  EXPECT_EQ(lines, 1 + 4 * 3);
}

TEST(Cli, UsageErrorsExitOne) {
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("solve-src --instance " + fixture("orthogonal.json")).code, 1);
  EXPECT_EQ(run("solve-srm --instance /nonexistent.json").code, 1);
  EXPECT_EQ(run("solve-srm --instance " + fixture("orthogonal.json") + " --tol 0.5").code, 1);
  EXPECT_EQ(run("frobnicate").code, 1);
  EXPECT_EQ(run("--help").code, 0);
}

TEST(Cli, MalformedInstanceExitsOne) {
  const fs::path bad = fs::temp_directory_path() / "misosec_cli_bad.json";
  std::ofstream(bad) << "{\"n_t\": 2,";
  EXPECT_EQ(run("solve-srm --instance " + bad.string()).code, 1);
}
