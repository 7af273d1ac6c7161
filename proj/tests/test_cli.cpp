#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "vnlw/cli.hpp"

using namespace vnlw;
using namespace vnlw::cli;
namespace fs = std::filesystem;

namespace {

std::string config_path(const std::string& name) { return std::string(VNLW_CONFIG_DIR) + "/" + name; }

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        root_ = fs::temp_directory_path() / (std::string("vnlw_cli_") + info->name());
        fs::remove_all(root_);
    }
    void TearDown() override { fs::remove_all(root_); }

    /// Runs the CLI in-process; returns the exit status.
    int run(std::vector<std::string> args) {
        args.insert(args.begin(), "vnlw");
        std::vector<char*> argv;
        for (auto& a : args) argv.push_back(a.data());
        out_.str("");
        err_.str("");
        return vnlw::cli::main(int(argv.size()), argv.data(), out_, err_);
    }

    std::string write_config(const std::string& name, const std::string& text) {
        fs::create_directories(root_ / "cfg");
        const fs::path p = root_ / "cfg" / name;
        std::ofstream(p) << text;
        return p.string();
    }

    static std::string slurp(const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream s;
        s << in.rdbuf();
        return s.str();
    }

    fs::path root_;
    std::ostringstream out_, err_;
};

int parse_status(const std::vector<std::string>& args) {
    try {
        (void)parse_invocation(args);
    } catch (const CliError& e) {
        return e.status();
    }
    return exit_ok;
}

}  // namespace

TEST(CliParse, RunWithConfig) {
    const CliInvocation inv = parse_invocation({"run", "--config", config_path("twoslit.json")});
    EXPECT_EQ(inv.subcommand, Subcommand::Run);
    EXPECT_EQ(inv.config.scenario, "two-slit");
    EXPECT_EQ(inv.format, TableFormat::Csv);
    EXPECT_TRUE(inv.timestamp);
}

TEST(CliParse, OverrideAppliedBeforeValidation) {
    const CliInvocation inv =
        parse_invocation({"gaps", "--config", config_path("harmonic.json"), "--set", "spectra.k=6"});
    EXPECT_EQ(inv.subcommand, Subcommand::Gaps);
    EXPECT_EQ(inv.config.spectra.k, 6u);
}

TEST(CliParse, OptionsAndSeed) {
    const CliInvocation inv = parse_invocation({"entropy", "-c", config_path("random.json"), "-o", "/tmp/x",
                                                "--seed", "99", "--format", "gnuplot", "--no-timestamp"});
    EXPECT_EQ(inv.config.seed, 99u);
    EXPECT_EQ(inv.output_dir, "/tmp/x");
    EXPECT_EQ(inv.format, TableFormat::Gnuplot);
    EXPECT_FALSE(inv.timestamp);
}

TEST(CliParse, UsageErrors) {
    EXPECT_EQ(parse_status({"frobnicate"}), exit_usage);
    EXPECT_EQ(parse_status({}), exit_usage);
    EXPECT_EQ(parse_status({"run"}), exit_usage);
    EXPECT_EQ(parse_status({"run", "--config", "/nonexistent/vnlw.json"}), exit_usage);
    EXPECT_EQ(parse_status({"run", "--config", config_path("harmonic.json"), "--format", "xml"}), exit_usage);
}

TEST(CliParse, SchemaErrors) {
    EXPECT_EQ(parse_status({"evolve", "--config", config_path("product.json"), "--set", "dynamics.dt=0"}),
              exit_schema);
    EXPECT_EQ(parse_status({"run", "--config", config_path("harmonic.json"), "--set", "spectra.kay=1"}),
              exit_schema);
    try {
        (void)parse_invocation({"run", "--config", config_path("harmonic.json"), "--set", "grid.spacing=1"});
        FAIL();
    } catch (const CliError& e) {
        EXPECT_NE(std::string(e.what()).find("grid.spacing"), std::string::npos);
    }
}

TEST(CliParse, HelpIsNotAnError) { EXPECT_EQ(parse_status({"--help"}), exit_ok); }

TEST_F(CliTest, GapsWritesCsvAndSummary) {
    ASSERT_EQ(run({"gaps", "-c", config_path("harmonic.json"), "-o", root_.string(), "--no-timestamp"}), exit_ok)
        << err_.str();
    EXPECT_EQ(out_.str().rfind("gaps distinct_gap_count=7 elapsed=", 0), 0u) << out_.str();
    const fs::path dir = root_ / "gaps";
    ASSERT_TRUE(fs::is_directory(dir));
    const std::string csv = slurp(dir / "gaps.csv");
    EXPECT_EQ(csv.rfind("n,m,lambda\r\n", 0), 0u);
    const json summary = json::parse(slurp(dir / "summary.json"));
    EXPECT_EQ(summary.at("results").at("distinct_gap_count").get<int>(), 7);
    EXPECT_EQ(summary.at("config").at("spectra").at("k").get<int>(), 4);
    EXPECT_TRUE(fs::is_regular_file(dir / "timing.json"));
}

TEST_F(CliTest, GnuplotAndJsonFormats) {
    ASSERT_EQ(run({"spectrum", "-c", config_path("harmonic.json"), "-o", root_.string(), "--no-timestamp",
                   "--format", "gnuplot"}),
              exit_ok);
    bool found_dat = false;
    for (const auto& e : fs::directory_iterator(root_ / "spectrum")) found_dat |= e.path().extension() == ".dat";
    EXPECT_TRUE(found_dat);
    ASSERT_EQ(run({"collapse", "-c", config_path("collapse.json"), "-o", root_.string(), "--no-timestamp",
                   "--format", "json"}),
              exit_ok);
    const json t = json::parse(slurp(root_ / "collapse" / "collapse.json"));
    EXPECT_EQ(t.at("columns")[2], "p");
}

TEST_F(CliTest, TimestampedDirectoryName) {
    ASSERT_EQ(run({"spectrum", "-c", config_path("harmonic.json"), "-o", root_.string()}), exit_ok);
    std::vector<std::string> names;
    for (const auto& e : fs::directory_iterator(root_)) names.push_back(e.path().filename().string());
    ASSERT_EQ(names.size(), 1u);
    EXPECT_EQ(names[0].rfind("spectrum-", 0), 0u);
    EXPECT_EQ(names[0].back(), 'Z');
}

TEST_F(CliTest, ValidateConfigWritesNothing) {
    EXPECT_EQ(run({"validate-config", "-c", config_path("twoslit.json"), "-o", root_.string()}), exit_ok);
    EXPECT_NE(out_.str().find("ok"), std::string::npos);
    EXPECT_FALSE(fs::exists(root_));
}

TEST_F(CliTest, SeededSummariesAreByteIdentical) {
    const fs::path a = root_ / "a", b = root_ / "b";
    ASSERT_EQ(run({"entropy", "-c", config_path("random.json"), "-o", a.string(), "--no-timestamp", "--seed", "5"}),
              exit_ok);
    ASSERT_EQ(run({"entropy", "-c", config_path("random.json"), "-o", b.string(), "--no-timestamp", "--seed", "5"}),
              exit_ok);
    EXPECT_EQ(slurp(a / "entropy" / "summary.json"), slurp(b / "entropy" / "summary.json"));
    EXPECT_EQ(slurp(a / "entropy" / "density.csv"), slurp(b / "entropy" / "density.csv"));
}

TEST_F(CliTest, NumericalFailureLeavesNoPartialOutput) {
    const std::string cfg = write_config("bad.json", R"({"schema_version": 1,
        "scenario": {"name": "two-slit", "state": {"kind": "two-slit", "coefficients": [0, 0, 0, 0]}}})");
    EXPECT_EQ(run({"entropy", "-c", cfg, "-o", (root_ / "out").string()}), exit_numerical);
    EXPECT_NE(err_.str().find("non-normalized-coefficients"), std::string::npos) << err_.str();
    EXPECT_FALSE(fs::exists(root_ / "out") && !fs::is_empty(root_ / "out"));
}

TEST_F(CliTest, SchemaViolationExitCode) {
    const std::string cfg = write_config("bad.json", R"({"schema_version": 1, "grid": {"n_points": 4}})");
    EXPECT_EQ(run({"run", "-c", cfg}), exit_schema);
    EXPECT_NE(err_.str().find("grid.n_points"), std::string::npos);
}

TEST_F(CliTest, OutputDirFromEnvironment) {
    ::setenv("VNLW_OUTPUT_DIR", (root_ / "env").c_str(), 1);
    const int status = run({"schmidt", "-c", config_path("random.json"), "--no-timestamp"});
    ::unsetenv("VNLW_OUTPUT_DIR");
    ASSERT_EQ(status, exit_ok) << err_.str();
    EXPECT_TRUE(fs::is_regular_file(root_ / "env" / "schmidt" / "summary.json"));
}

TEST_F(CliTest, RerunReplacesExistingDirectory) {
    const std::vector<std::string> args{"gaps", "-c", config_path("harmonic.json"), "-o", root_.string(),
                                        "--no-timestamp"};
    ASSERT_EQ(run(args), exit_ok);
    std::ofstream(root_ / "gaps" / "stale.txt") << "x";
    ASSERT_EQ(run(args), exit_ok);
    EXPECT_FALSE(fs::exists(root_ / "gaps" / "stale.txt"));
    for (const auto& e : fs::directory_iterator(root_)) EXPECT_NE(e.path().filename().string()[0], '.');
}
