#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "locfuse/locfuse.hpp"

using namespace locfuse;
using namespace locfuse::io;

namespace {

std::string message_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

}  // namespace

TEST(Csv, FormatRoundTripsDoubles) {
    for (double v : {0.0, 1.0, -2.5, 0.1, 1e-300, 123456789.125, std::numbers::pi, 2.60289}) {
        double back = 0.0;
        ASSERT_TRUE(parse_double(format_double(v), back));
        EXPECT_EQ(back, v);
    }
    EXPECT_EQ(format_double(0.0), "0");
    EXPECT_EQ(format_double(-0.0), "-0");
    EXPECT_EQ(format_double(0.5), "0.5");
}

TEST(Csv, ParseRejectsJunk) {
    double v = 0.0;
    EXPECT_FALSE(parse_double("", v));
    EXPECT_FALSE(parse_double("1.5x", v));
    EXPECT_TRUE(parse_double("+3", v));
    EXPECT_EQ(v, 3.0);
    std::uint64_t u = 0;
    EXPECT_FALSE(parse_u64("-1", u));
    EXPECT_TRUE(parse_u64("42", u));
}

TEST(Csv, SplitKeepsEmptyFields) {
    const auto f = split_row("a,,b,\r");
    ASSERT_EQ(f.size(), 4u);
    EXPECT_EQ(f[1], "");
    EXPECT_EQ(f[3], "");
}

TEST(ScenarioFile, MinimalDocumentUsesDefaults) {
    const Scenario s = parse_scenario(R"({"seed": 3})");
    EXPECT_EQ(s.seed, 3u);
    EXPECT_EQ(s.track.kind, TrackKind::Straight);
    EXPECT_EQ(s.rates.uwb, 10.0);
    EXPECT_EQ(s.rates.radar, 130.0);
    EXPECT_EQ(s.variant, Variant::Fused);
    EXPECT_FALSE(s.duration);
}

TEST(ScenarioFile, EchoRoundTripsExactly) {
    Scenario s = parse_scenario(R"({
        "seed": 17, "name": "rt",
        "track": {"kind": "race"},
        "speed": {"profile": "low"},
        "environment": {"id": "E2"},
        "asa": {"enabled": true, "theta_threshold_deg": 12.5},
        "noise": {"uwb": {"bias": {"variance": {"x": 1e-4, "y": 2e-4, "vx": 0, "vy": 0}, "time_constant": 2.0}}},
        "duration": 60.5})");
    const auto first = to_json(s);
    const Scenario back = scenario_from_json(json::parse(first.dump()));
    EXPECT_EQ(to_json(back).dump(), first.dump());
    EXPECT_NEAR(back.asa.theta_threshold, 12.5 * std::numbers::pi / 180.0, 1e-15);
    EXPECT_EQ(*back.duration, 60.5);
    EXPECT_TRUE(run_scenario(s).same_outputs(run_scenario(back)));
}

TEST(ScenarioFile, DefaultsRoundTrip) {
    const auto first = to_json(default_scenario());
    EXPECT_EQ(to_json(scenario_from_json(json::parse(first.dump()))).dump(), first.dump());
    EXPECT_EQ(first["duration"], "auto");
    EXPECT_TRUE(first["environment"]["walls"].is_null());
}

TEST(ScenarioFile, SchemaErrors) {
    EXPECT_TRUE(contains(message_of([] { parse_scenario(R"({"name": "x"})"); }), "seed is required"));
    EXPECT_TRUE(contains(message_of([] { parse_scenario(R"({"seed": -1})"); }), "seed"));
    EXPECT_TRUE(contains(message_of([] { parse_scenario(R"({"seed": 1.5})"); }), "seed"));
    EXPECT_TRUE(contains(message_of([] { parse_scenario(R"({"seed": 1, "colour": 2})"); }), "colour"));
    EXPECT_TRUE(contains(message_of([] { parse_scenario(R"({"seed": 1, "track": {"kind": 3}})"); }), "kind"));
    EXPECT_TRUE(contains(message_of([] { parse_scenario(R"({"seed": 1, "preset": "other"})"); }), "preset"));
    EXPECT_TRUE(contains(message_of([] { parse_scenario(R"({"seed": 1, "duration": "long"})"); }), "duration"));
    EXPECT_TRUE(contains(message_of([] { parse_scenario(R"({"seed": 1, "variant": "best"})"); }), "best"));
    EXPECT_TRUE(contains(message_of([] { parse_scenario("{", "bad.json"); }), "bad.json"));
    EXPECT_TRUE(contains(message_of([] { parse_scenario(R"({"seed": 1, "rates": {"uwb": "fast"}})"); }), "rates.uwb"));
}

TEST(ScenarioFile, ThetaGivenTwiceIsAnError) {
    EXPECT_THROW(parse_scenario(R"({"seed": 1, "asa": {"theta_threshold": 0.1, "theta_threshold_deg": 6}})"), ConfigError);
}

TEST(ScenarioFile, ObjectsInE3AreAnError) {
    EXPECT_THROW(parse_scenario(R"({"seed": 1, "environment": {"id": "E3", "objects": [{"center": [0, 1], "radius": 0.2}]}})"),
                 ConfigError);
}

TEST(ScenarioFile, ExplicitObjectsReplaceLayout) {
    const Scenario s = parse_scenario(R"({"seed": 1, "environment": {"id": "E1", "objects": [{"center": [1, 2], "radius": 0.25}]}})");
    ASSERT_EQ(s.environment.objects.size(), 1u);
    EXPECT_EQ(s.environment.objects[0].center.x, 1.0);
    EXPECT_EQ(s.environment.objects[0].radius, 0.25);
}

TEST(ScenarioFile, RaceInE3ParsesButFailsValidation) {
    const Scenario s = parse_scenario(R"({"seed": 1, "track": {"kind": "race"}, "environment": {"id": "E3"}})");
    EXPECT_THROW(validate(s), ConfigError);
}

TEST(ScenarioFile, MissingFile) { EXPECT_THROW(load_scenario("/nonexistent/x.json"), ConfigError); }

TEST(ScenarioFile, SampleScenariosLoadAndValidate) {
    for (const auto& entry : std::filesystem::directory_iterator(LOCFUSE_SCENARIOS)) {
        if (entry.path().extension() != ".json") continue;
        const Scenario s = load_scenario(entry.path());
        if (entry.path().stem().string().find("invalid") != std::string::npos)
            EXPECT_THROW(validate(s), ConfigError) << entry.path();
        else
            EXPECT_NO_THROW(validate(s)) << entry.path();
    }
}

TEST(TraceCsv, ByteIdenticalAcrossRuns) {
    Scenario s;
    s.asa_enabled = true;
    EXPECT_EQ(trace_to_csv(run_scenario(s)), trace_to_csv(run_scenario(s)));
}

TEST(TraceCsv, ParseRoundTrip) {
    Scenario s;
    s.asa_enabled = true;
    const SimulationTrace t = run_scenario(s);
    const SimulationTrace back = parse_trace_csv(trace_to_csv(t));
    EXPECT_TRUE(back.same_outputs(t));
    EXPECT_TRUE(back.has_truth);
}

TEST(TraceCsv, TruthlessTraceLeavesColumnsEmpty) {
    SimulationTrace t;
    t.has_truth = false;
    t.rows.push_back(TraceRow{});
    const std::string csv = trace_to_csv(t);
    EXPECT_TRUE(contains(csv, "\n1,0,,,,,0,"));
    EXPECT_FALSE(parse_trace_csv(csv).has_truth);
}

TEST(TraceCsv, ParseErrors) {
    EXPECT_THROW(parse_trace_csv(""), ConfigError);
    EXPECT_THROW(parse_trace_csv("t,x\n"), ConfigError);
    const std::string header = join_header(trace_columns()) + "\n";
    EXPECT_THROW(parse_trace_csv(header + "2,0,0,0,0,0,0,0,0,0,0,0,0,0,10,130,1,0,0\n"), ConfigError);
    EXPECT_THROW(parse_trace_csv(header + "1,0,0,0\n"), ConfigError);
    EXPECT_THROW(parse_trace_csv(header + "1,0,0,0,0,0,0,0,0,0,0,0,0,0,10,130,1,2,0\n"), ConfigError);
}

TEST(LatencyCsv, OneRowPerTick) {
    const SimulationTrace t = run_scenario(Scenario{});
    const std::string csv = latency_to_csv(t);
    EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), t.size() + 1);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "tick,t,step_time_s");
}

TEST(SensorLog, DumpReplayIsBitExact) {
    for (bool asa : {false, true})
        for (Variant v : {Variant::Fused, Variant::ImuRadar}) {
            Scenario s = default_scenario();
            s.track = TrackProfile::race();
            s.environment = default_environment(EnvironmentId::E1, s.track);
            s.asa_enabled = asa;
            s.variant = v;
            SensorLog log;
            const SimulationTrace run = run_scenario(s, &log);
            const SensorLog parsed = parse_sensor_log(sensor_log_to_csv(log));
            const SimulationTrace rep = replay_log(parsed, s.filter, initial_estimate(s), v);
            ASSERT_EQ(rep.size(), run.size());
            EXPECT_TRUE(rep.has_truth);
            for (std::size_t k = 0; k < run.size(); ++k) {
                ASSERT_EQ(rep.rows[k].estimate.x, run.rows[k].estimate.x) << k;
                ASSERT_EQ(rep.rows[k].estimate.y, run.rows[k].estimate.y) << k;
                ASSERT_EQ(rep.rows[k].estimate.vx, run.rows[k].estimate.vx) << k;
                ASSERT_EQ(rep.rows[k].estimate.vy, run.rows[k].estimate.vy) << k;
                ASSERT_EQ(rep.rows[k].cov_diag, run.rows[k].cov_diag) << k;
                ASSERT_EQ(rep.rows[k].truth.x, run.rows[k].truth.x) << k;
            }
            EXPECT_EQ(rmse_cm(rep), rmse_cm(run));
        }
}

TEST(SensorLog, CsvRoundTrip) {
    SensorLog log;
    run_scenario(default_scenario(), &log);
    const std::string csv = sensor_log_to_csv(log);
    EXPECT_EQ(sensor_log_to_csv(parse_sensor_log(csv)), csv);
}

TEST(SensorLog, TruthlessReplay) {
    SensorLog log;
    run_scenario(default_scenario(), &log);
    for (auto& r : log) r.truth.reset();
    const SimulationTrace rep = replay_log(parse_sensor_log(sensor_log_to_csv(log)), FilterConfig{},
                                           initial_estimate(default_scenario()));
    EXPECT_FALSE(rep.has_truth);
    EXPECT_THROW(rmse_cm(rep), ContractError);
}

TEST(SensorLog, ErrorsCarryLineNumbers) {
    const std::string header = join_header(sensor_log_columns()) + "\n";
    const std::string imu = "0,imu,0,0,0,,,,,,,,,\n";
    EXPECT_TRUE(contains(message_of([] { parse_sensor_log(""); }), "empty"));
    EXPECT_TRUE(contains(message_of([&] { parse_sensor_log(header, "log.csv"); }), "log.csv: log has no rows"));
    EXPECT_TRUE(contains(message_of([] { parse_sensor_log("t,sensor\n", "h.csv"); }), "h.csv:1"));
    EXPECT_TRUE(contains(message_of([&] { parse_sensor_log(header + imu + "0.001,imu,1,2\n", "a"); }), "a:3"));
    EXPECT_TRUE(contains(message_of([&] { parse_sensor_log(header + imu + "0.001,gps,0,0,0,,,,,,,,,\n", "a"); }),
                         "unknown sensor"));
    EXPECT_TRUE(contains(message_of([&] { parse_sensor_log(header + "1,imu,0,0,0,,,,,,,,,\n" + imu, "a"); }),
                         "a:3: rows must be time-sorted"));
    EXPECT_TRUE(contains(message_of([&] { parse_sensor_log(header + "0,uwb,,,,1,2,,4,,,,,\n", "a"); }), "vx"));
    EXPECT_TRUE(contains(message_of([&] { parse_sensor_log(header + "0,uwb,1,,,1,2,3,4,,,,,\n", "a"); }),
                         "does not apply"));
    EXPECT_TRUE(contains(message_of([&] { parse_sensor_log(header + "0,imu,0,0,0,,,,,,1,2,,\n", "a"); }),
                         "all present or all empty"));
    EXPECT_TRUE(contains(message_of([&] { parse_sensor_log(header + "0,imu,nan,0,0,,,,,,,,,\n", "a"); }), "ax"));
}

TEST(SensorLog, RadarDistanceIsOptional) {
    const std::string header = join_header(sensor_log_columns()) + "\n";
    const SensorLog log = parse_sensor_log(header + "0,radar,,,,1,2,3,4,,,,,\n0,radar,,,,1,2,3,4,0.5,,,,\n");
    EXPECT_FALSE(log[0].radar.distance);
    EXPECT_EQ(*log[1].radar.distance, 0.5);
}

TEST(Summary, HasExpectedFields) {
    const Scenario s = default_scenario();
    const SimulationTrace t = run_scenario(s);
    const auto j = run_summary(s, t, energy_report(t, s.power));
    for (const char* key : {"schema_version", "code_version", "scenario", "variant", "seed", "ticks", "duration_s",
                            "rmse_cm", "mean_power_w", "energy_j", "baseline_energy_j", "saving_pct", "latency",
                            "config"})
        EXPECT_TRUE(j.contains(key)) << key;
    EXPECT_EQ(j["saving_pct"], 0.0);
    EXPECT_EQ(j["ticks"], t.size());
    const auto replay = run_summary(s, t, std::nullopt);
    EXPECT_FALSE(replay.contains("energy_j"));
}
