#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

const std::string kCli = LOCFUSE_CLI;
const std::string kScenarios = LOCFUSE_SCENARIOS;

struct Result {
    int code = -1;
    std::string output;
};

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / (std::string("locfuse_cli_") + info->name() + "_" +
                                            std::to_string(::getpid()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    Result run(const std::string& args) const {
        const fs::path log = dir_ / "stdout.txt";
        const std::string cmd = kCli + " " + args + " > " + log.string() + " 2>&1";
        const int status = std::system(cmd.c_str());
        Result r;
        r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        r.output = read(log);
        return r;
    }

    static std::string read(const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream buf;
        buf << in.rdbuf();
        return buf.str();
    }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, SimulatePresetWritesArtifacts) {
    const Result r = run("simulate --preset paper-defaults --out " + path("a"));
    ASSERT_EQ(r.code, 0) << r.output;
    for (const char* f : {"trace.csv", "latency.csv", "summary.json"}) EXPECT_TRUE(fs::exists(dir_ / "a" / f)) << f;
    const auto j = nlohmann::json::parse(read(dir_ / "a" / "summary.json"));
    for (const char* key : {"rmse_cm", "mean_power_w", "energy_j", "saving_pct", "latency", "config", "seed"})
        EXPECT_TRUE(j.contains(key)) << key;
    EXPECT_EQ(j["scenario"], "paper-defaults");
    EXPECT_LT(j["latency"]["mean_ms"].get<double>(), 1.0);
}

TEST_F(Cli, SimulateIsByteIdenticalAcrossRuns) {
    ASSERT_EQ(run("simulate --scenario " + kScenarios + "/race_e1_asa.json --out " + path("a")).code, 0);
    ASSERT_EQ(run("simulate --scenario " + kScenarios + "/race_e1_asa.json --out " + path("b")).code, 0);
    const std::string a = read(dir_ / "a" / "trace.csv");
    EXPECT_FALSE(a.empty());
    EXPECT_EQ(a, read(dir_ / "b" / "trace.csv"));
}

TEST_F(Cli, RaceInE3IsAConfigError) {
    const Result r = run("simulate --scenario " + kScenarios + "/race_e3_invalid.json --out " + path("a"));
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.output.find("race track in E3 is excluded"), std::string::npos) << r.output;
}

TEST_F(Cli, MissingSeedIsAConfigError) {
    std::ofstream(path("s.json")) << R"({"name": "x"})";
    const Result r = run("validate --scenario " + path("s.json"));
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.output.find("seed is required"), std::string::npos) << r.output;
}

TEST_F(Cli, UsageErrors) {
    EXPECT_EQ(run("simulate --out " + path("a")).code, 1);
    EXPECT_EQ(run("simulate --preset paper-defaults").code, 1);
    EXPECT_EQ(run("simulate --preset other --out " + path("a")).code, 1);
    EXPECT_EQ(run("frobnicate").code, 1);
    EXPECT_EQ(run("simulate --preset paper-defaults --scenario x.json --out " + path("a")).code, 1);
    EXPECT_EQ(run("--help").code, 0);
}

TEST_F(Cli, SweepRejectsOutOfRangeFrequency) {
    const Result r = run("sweep --preset paper-defaults --grid-radar 200 --out " + path("s"));
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.output.find("outside"), std::string::npos) << r.output;
}

TEST_F(Cli, SingleCellSweepMatchesSimulate) {
    ASSERT_EQ(run("simulate --preset paper-defaults --out " + path("a")).code, 0);
    const Result r = run("sweep --preset paper-defaults --seeds 1 --grid-uwb 10 --grid-radar 130 --out " + path("s"));
    ASSERT_EQ(r.code, 0) << r.output;
    const auto summary = nlohmann::json::parse(read(dir_ / "a" / "summary.json"));
    const std::string csv = read(dir_ / "s" / "sweep.csv");
    std::istringstream in(csv);
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    EXPECT_EQ(header, "f_uwb,f_radar,seed,rmse_cm,sensing_power_w");
    std::vector<std::string> f;
    std::stringstream ss(row);
    for (std::string x; std::getline(ss, x, ',');) f.push_back(x);
    ASSERT_EQ(f.size(), 5u);
    EXPECT_EQ(std::stod(f[3]), summary["rmse_cm"].get<double>());
    EXPECT_NEAR(std::stod(f[4]), 2.60289, 1e-9);
    EXPECT_TRUE(fs::exists(dir_ / "s" / "sweep_cells.csv"));
    EXPECT_TRUE(fs::exists(dir_ / "s" / "config.json"));
}

TEST_F(Cli, CompareNeedsTwoVariants) {
    const Result r = run("compare --preset paper-defaults --variants fused --out " + path("c"));
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(run("compare --preset paper-defaults --variants fused,gps --out " + path("c")).code, 1);
}

TEST_F(Cli, CompareWritesPerSeedTable) {
    const Result r = run("compare --preset paper-defaults --variants fused,imu-only --seeds 3 --out " + path("c"));
    ASSERT_EQ(r.code, 0) << r.output;
    const std::string csv = read(dir_ / "c" / "compare.csv");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 2 * 3);
    EXPECT_TRUE(fs::exists(dir_ / "c" / "compare_variants.csv"));
}

TEST_F(Cli, ReplayReproducesSimulate) {
    ASSERT_EQ(run("simulate --preset paper-defaults --dump-sensors --out " + path("a")).code, 0);
    const Result r = run("replay --preset paper-defaults --log " + path("a/sensors.csv") + " --out " + path("r"));
    ASSERT_EQ(r.code, 0) << r.output;
    const auto a = nlohmann::json::parse(read(dir_ / "a" / "summary.json"));
    const auto b = nlohmann::json::parse(read(dir_ / "r" / "summary.json"));
    EXPECT_EQ(a["rmse_cm"], b["rmse_cm"]);
    EXPECT_EQ(a["ticks"], b["ticks"]);
    EXPECT_FALSE(b.contains("energy_j"));

    // Estimate and covariance columns agree byte for byte.
    auto estimates = [](const std::string& csv) {
        std::istringstream in(csv);
        std::string out, line;
        while (std::getline(in, line)) {
            std::vector<std::string> f;
            std::stringstream ss(line);
            for (std::string x; std::getline(ss, x, ',');) f.push_back(x);
            for (std::size_t i = 6; i < 14 && i < f.size(); ++i) out += f[i] + ",";
            out += '\n';
        }
        return out;
    };
    EXPECT_EQ(estimates(read(dir_ / "a" / "trace.csv")), estimates(read(dir_ / "r" / "trace.csv")));
}

TEST_F(Cli, ReplayEmptyLogIsAConfigError) {
    ASSERT_EQ(run("simulate --preset paper-defaults --dump-sensors --out " + path("a")).code, 0);
    const std::string dump = read(dir_ / "a" / "sensors.csv");
    std::ofstream(path("empty.csv")) << dump.substr(0, dump.find('\n') + 1);
    const Result r = run("replay --preset paper-defaults --log " + path("empty.csv") + " --out " + path("r"));
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.output.find("no rows"), std::string::npos) << r.output;
}

TEST_F(Cli, ValidatePrintsResolvedScenario) {
    const Result r = run("validate --scenario " + kScenarios + "/race_e1_asa.json");
    ASSERT_EQ(r.code, 0) << r.output;
    const auto j = nlohmann::json::parse(r.output);
    EXPECT_EQ(j["track"]["kind"], "race");
    EXPECT_EQ(j["asa"]["enabled"], true);
    EXPECT_EQ(j["environment"]["objects"].size(), 3u);
}
