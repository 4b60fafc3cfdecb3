#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "test_support.hpp"

namespace fs = std::filesystem;
using ezguide::read_text_file;
using ezguide::testing::scratch_dir;

namespace {

struct Result {
    int code{-1};
    std::string out;
    std::string err;
};

/// Runs the CLI with `args`, capturing stdout and stderr through files in `dir`.
Result cli(const std::string& args, const fs::path& dir, const std::string& env = {}) {
    const fs::path out = dir / "stdout.txt", err = dir / "stderr.txt";
    const std::string cmd = env + (env.empty() ? "" : " ") + "'" EZGUIDE_CLI_PATH "' " + args + " >'" +
                            out.string() + "' 2>'" + err.string() + "'";
    const int status = std::system(cmd.c_str());
    Result r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = read_text_file(out);
    r.err = read_text_file(err);
    return r;
}

nlohmann::json read_json(const fs::path& p) { return nlohmann::json::parse(read_text_file(p)); }

}  // namespace

TEST(Cli, RunScenarioOneWritesEverything) {
    const fs::path dir = scratch_dir("cli_run1");
    const Result r = cli("run paper_scenario_1 --out '" + (dir / "r1").string() + "'", dir);
    EXPECT_EQ(r.code, 0) << r.err;
    for (const char* f : {"trajectory.csv", "summary.json", "trajectory.svg", "range_bearing.svg", "safety.svg",
                          "accel.svg"})
        EXPECT_TRUE(fs::exists(dir / "r1" / f)) << f;
    const auto j = read_json(dir / "r1" / "summary.json");
    EXPECT_EQ(j["outcome"], "Intercepted");
    EXPECT_NE(r.out.find("Intercepted"), std::string::npos);
}

TEST(Cli, RunScenarioTwoReportsSaturation) {
    const fs::path dir = scratch_dir("cli_run2");
    const Result r = cli("run paper_scenario_2 --no-plots --out '" + (dir / "r2").string() + "'", dir);
    EXPECT_EQ(r.code, 0) << r.err;
    const auto j = read_json(dir / "r2" / "summary.json");
    EXPECT_GE(j["saturation"]["episodes"].size(), 1u);
    EXPECT_FALSE(fs::exists(dir / "r2" / "accel.svg"));
}

TEST(Cli, RunTwiceIsByteIdentical) {
    const fs::path dir = scratch_dir("cli_twice");
    for (const char* sub : {"a", "b"})
        ASSERT_EQ(cli("run paper_scenario_2 --out '" + (dir / sub).string() + "'", dir).code, 0);
    for (const char* f : {"trajectory.csv", "summary.json", "trajectory.svg", "accel.svg"})
        EXPECT_EQ(read_text_file(dir / "a" / f), read_text_file(dir / "b" / f)) << f;
}

TEST(Cli, ExitCodesFollowOutcome) {
    const fs::path dir = scratch_dir("cli_codes");
    const std::string out = " --no-plots --out '" + (dir / "o").string() + "'";
    EXPECT_EQ(cli("run paper_scenario_1 --t-max 2" + out, dir).code, 3);
    EXPECT_EQ(cli("run paper_scenario_1 --set attacker.x=3 --set attacker.y=1.6" + out, dir).code, 4);
    EXPECT_EQ(read_json(dir / "o" / "summary.json")["outcome"], "InvalidStart");
    EXPECT_EQ(cli("run paper_scenario_1 --set params.eps_alpha=-100" + out, dir).code, 2);
    EXPECT_EQ(read_json(dir / "o" / "summary.json")["outcome"], "EZViolation");
}

TEST(Cli, ErrorsExitOne) {
    const fs::path dir = scratch_dir("cli_errors");
    const std::string out = " --out '" + (dir / "o").string() + "'";
    Result r = cli("run /no/such/file.scn" + out, dir);
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("/no/such/file.scn"), std::string::npos) << r.err;
    EXPECT_EQ(cli("run paper_scenario_1 --set params.K_zz=1" + out, dir).code, 1);
    r = cli("run paper_scenario_1 --set defender.1.mu=1.2" + out, dir);
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("mu must lie in (0,1)"), std::string::npos) << r.err;
    EXPECT_EQ(cli("frobnicate", dir).code, 1);
    EXPECT_EQ(cli("", dir).code, 1);
}

TEST(Cli, HelpExitsZero) {
    const fs::path dir = scratch_dir("cli_help");
    const Result r = cli("--help", dir);
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("sweep"), std::string::npos);
}

TEST(Cli, OutputDirectoryFromEnvironment) {
    const fs::path dir = scratch_dir("cli_env");
    const Result r = cli("run paper_scenario_2 --no-plots", dir, "EZGUIDE_OUT_DIR='" + (dir / "env").string() + "'");
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(fs::exists(dir / "env" / "summary.json"));
}

TEST(Cli, ScenarioByPath) {
    const fs::path dir = scratch_dir("cli_path");
    const fs::path scn = dir / "mine.scn";
    std::ofstream(scn) << "version = 1\n[attacker]\nx = 0\ny = 0\n[target]\nx = 3\ny = 0\n";
    const Result r = cli("run '" + scn.string() + "' --out '" + (dir / "o").string() + "'", dir);
    EXPECT_EQ(r.code, 0) << r.err;
}

TEST(Cli, SingletonSweepMatchesRun) {
    const fs::path dir = scratch_dir("cli_single");
    const Result s = cli("sweep paper_scenario_1 --sampler single --out '" + (dir / "s").string() + "'", dir);
    EXPECT_EQ(s.code, 0) << s.err;
    ASSERT_EQ(cli("run paper_scenario_1 --no-plots --out '" + (dir / "r").string() + "'", dir).code, 0);
    const auto rep = read_json(dir / "s" / "sweep_report.json");
    const auto sum = read_json(dir / "r" / "summary.json");
    ASSERT_EQ(rep["runs"].size(), 1u);
    EXPECT_EQ(rep["runs"][0]["outcome"]["kind"], sum["outcome"]);
    EXPECT_EQ(rep["runs"][0]["t_f"], sum["t_f"]);
    EXPECT_EQ(rep["runs"][0]["min_b"], sum["min_b"]);
}

TEST(Cli, SweepDeterministicAndSeedSensitive) {
    const fs::path dir = scratch_dir("cli_sweep");
    const std::string common = "sweep paper_scenario_1 --count 8 --t-max 5 --heading uniform --jobs 2";
    ASSERT_NE(cli(common + " --out '" + (dir / "a").string() + "'", dir).code, 1);
    ASSERT_NE(cli(common + " --out '" + (dir / "b").string() + "'", dir).code, 1);
    ASSERT_NE(cli(common + " --seed 8 --out '" + (dir / "c").string() + "'", dir).code, 1);
    const std::string a = read_text_file(dir / "a" / "sweep_report.json");
    EXPECT_EQ(a, read_text_file(dir / "b" / "sweep_report.json"));
    const auto ja = nlohmann::json::parse(a);
    const auto jc = read_json(dir / "c" / "sweep_report.json");
    EXPECT_NE(ja["runs"][0]["start"], jc["runs"][0]["start"]);
    std::vector<std::string> ka, kc;
    for (auto it = ja.begin(); it != ja.end(); ++it) ka.push_back(it.key());
    for (auto it = jc.begin(); it != jc.end(); ++it) kc.push_back(it.key());
    EXPECT_EQ(ka, kc);
}

TEST(Cli, SweepExitTwoOnViolation) {
    const fs::path dir = scratch_dir("cli_sweep_bad");
    const Result r = cli("sweep paper_scenario_1 --sampler single --set params.eps_alpha=-100 --out '" +
                             (dir / "o").string() + "'",
                         dir);
    EXPECT_EQ(r.code, 2);
}

TEST(Cli, CheckPasses) {
    const fs::path dir = scratch_dir("cli_check");
    const Result r = cli("check --trials 50", dir);
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_EQ(r.out.find("FAIL"), std::string::npos) << r.out;
}

TEST(Cli, PlotSelectedKinds) {
    const fs::path dir = scratch_dir("cli_plot");
    const Result r = cli("plot paper_scenario_2 --kind safety --kind accel --out '" + dir.string() + "/p'", dir);
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(fs::exists(dir / "p" / "safety.svg"));
    EXPECT_TRUE(fs::exists(dir / "p" / "accel.svg"));
    EXPECT_FALSE(fs::exists(dir / "p" / "trajectory.svg"));
    EXPECT_EQ(cli("plot paper_scenario_2 --kind pie --out '" + dir.string() + "/p'", dir).code, 1);
}
