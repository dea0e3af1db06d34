#include "vibrobeam/commands.hpp"
#include "vibrobeam/report.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace vibrobeam;
namespace fs = std::filesystem;

namespace {

class CommandsTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("vibrobeam_cmd_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    RunConfig small(const std::string& extra = "") const {
        RunConfig cfg = parse_config("[beam]\nn_elements = 3\n[excitation]\nfrequency = 150\n"
                                     "duration = 0.02\n[sweep]\nf_start = 100\nf_end = 200\n"
                                     "n_points = 3\ntf = 0.01\n" + extra);
        cfg.output_dir = dir_.string();
        return cfg;
    }

    CommandResult run(Command cmd, const RunConfig& cfg, const std::string& text = "") {
        out_.str("");
        err_.str("");
        return run_subcommand(cmd, cfg, text, out_, err_);
    }

    std::string read(const std::string& name) const {
        std::ifstream f(dir_ / name, std::ios::binary);
        std::ostringstream s;
        s << f.rdbuf();
        return s.str();
    }

    fs::path dir_;
    std::ostringstream out_;
    std::ostringstream err_;
};

} // namespace

TEST(ParseCommand, Names) {
    for (Command c : {Command::eigen, Command::simulate, Command::sweep, Command::spectrum}) {
        EXPECT_EQ(parse_command(to_string(c)), c);
    }
    EXPECT_FALSE(parse_command("plot").has_value());
}

TEST_F(CommandsTest, EigenTable) {
    RunConfig cfg = parse_config("[spring]\nk_r = 0\n");
    cfg.output_dir = dir_.string();
    const CommandResult r = run(Command::eigen, cfg);
    ASSERT_EQ(r.exit_code, exit_code::ok) << err_.str();
    EXPECT_EQ(r.files, (std::vector<std::string>{"eigen.csv", "manifest.json"}));
    std::istringstream csv(read("eigen.csv"));
    std::string line;
    std::getline(csv, line);
    int rows = 0;
    while (std::getline(csv, line)) {
        const double gap = std::stod(line.substr(line.rfind(',') + 1));
        EXPECT_LT(std::abs(gap), 1e-3) << line;
        ++rows;
    }
    EXPECT_EQ(rows, 6);
}

TEST_F(CommandsTest, SimulateAtRestIsZero) {
    RunConfig cfg = small();
    cfg.amplitude = 0.0;
    const CommandResult r = run(Command::simulate, cfg);
    ASSERT_EQ(r.exit_code, exit_code::ok) << err_.str();
    std::istringstream csv(read("timeseries.csv"));
    std::string line;
    std::getline(csv, line);
    EXPECT_EQ(line, "t,u_1,theta_1,u_2,theta_2,u_3,theta_3,u_tip_abs,f_contact");
    while (std::getline(csv, line)) {
        std::istringstream fields(line);
        std::string field;
        std::getline(fields, field, ',');
        while (std::getline(fields, field, ',')) {
            EXPECT_EQ(std::stod(field), 0.0) << line;
        }
    }
    EXPECT_NE(read("timeseries.svg").find("<svg"), std::string::npos);
}

TEST_F(CommandsTest, SweepIsByteIdenticalAcrossRunsAndThreads) {
    RunConfig cfg = small();
    ASSERT_EQ(run(Command::sweep, cfg).exit_code, exit_code::ok) << err_.str();
    const std::string first = read("sweep.csv");
    const std::string svg = read("sweep.svg");
    cfg.threads = 3;
    ASSERT_EQ(run(Command::sweep, cfg).exit_code, exit_code::ok);
    EXPECT_EQ(read("sweep.csv"), first);
    EXPECT_EQ(read("sweep.svg"), svg);
}

TEST_F(CommandsTest, SpectrumLabelsPeaks) {
    RunConfig cfg = small();
    cfg.duration = 0.2;
    const CommandResult r = run(Command::spectrum, cfg);
    ASSERT_EQ(r.exit_code, exit_code::ok) << err_.str();
    const std::string csv = read("spectrum.csv");
    EXPECT_EQ(csv.rfind("f_hz,amplitude_m,label\n", 0), 0u);
    EXPECT_NE(csv.find("drive_harmonic(1)"), std::string::npos);
}

TEST_F(CommandsTest, ManifestRecordsHashAndFiles) {
    const std::string text = "[beam]\nn_elements = 3\n";
    RunConfig cfg = parse_config(text);
    cfg.output_dir = dir_.string();
    ASSERT_EQ(run(Command::eigen, cfg, text).exit_code, exit_code::ok);
    const auto manifest = nlohmann::json::parse(read("manifest.json"));
    EXPECT_EQ(manifest["config_sha256"], sha256_hex(text));
    EXPECT_EQ(manifest["command"], "eigen");
    EXPECT_EQ(manifest["files"], nlohmann::json::array({"eigen.csv"}));
}

TEST_F(CommandsTest, PartialSweepExitCode) {
    RunConfig cfg = small();
    cfg.solver.rel_tol = 1e-300;
    cfg.solver.abs_tol = 1e-300;
    const CommandResult r = run(Command::sweep, cfg);
    EXPECT_EQ(r.exit_code, exit_code::partial_sweep);
    EXPECT_NE(err_.str().find("warning"), std::string::npos);
    EXPECT_TRUE(fs::exists(dir_ / "sweep.csv"));
}

TEST_F(CommandsTest, InvalidConfigIsConfigError) {
    RunConfig cfg = small();
    cfg.spring.stiffness = -1.0;
    EXPECT_EQ(run(Command::eigen, cfg).exit_code, exit_code::config_error);
}

TEST_F(CommandsTest, UnwritableOutputIsRuntimeError) {
    fs::create_directories(dir_);
    std::ofstream(dir_ / "file") << "x";
    RunConfig cfg = small();
    cfg.output_dir = (dir_ / "file" / "sub").string();
    EXPECT_EQ(run(Command::eigen, cfg).exit_code, exit_code::runtime_error);
}
