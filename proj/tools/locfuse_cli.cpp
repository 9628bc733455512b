// locfuse: run, sweep, compare and replay localization scenarios.
//
// Exit codes: 0 success, 1 configuration or input error, 2 numerical
// failure inside the filter, 3 internal error.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "locfuse/locfuse.hpp"

namespace fs = std::filesystem;
using namespace locfuse;

namespace {

struct ScenarioSource {
    std::string path;
    std::string preset;

    void add_to(CLI::App& cmd) {
        auto* file = cmd.add_option("--scenario", path, "scenario JSON file");
        auto* pre = cmd.add_option("--preset", preset, "built-in scenario (paper-defaults)");
        file->excludes(pre);
    }

    Scenario load() const {
        if (!path.empty()) return io::load_scenario(path);
        if (preset.empty()) throw ConfigError("give --scenario <path> or --preset paper-defaults");
        if (preset != io::kDefaultsPreset) throw ConfigError("unknown preset '" + preset + "'");
        return io::default_scenario();
    }
};

fs::path prepare_out(const std::string& out) {
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec || !fs::is_directory(out)) throw ConfigError("cannot create output directory " + out);
    return fs::path(out);
}

void write_json(const fs::path& path, const io::ordered_json& j) { io::write_text(path.string(), j.dump(2) + "\n"); }

std::vector<std::uint64_t> seeds_for(const Scenario& s, int count) {
    if (count < 1) throw ConfigError("--seeds must be at least 1");
    return seed_range(s.seed, static_cast<std::size_t>(count));
}

int cmd_simulate(const ScenarioSource& src, const std::string& out, bool dump_sensors) {
    const Scenario s = src.load();
    const fs::path dir = prepare_out(out);
    SensorLog log;
    const SimulationTrace trace = run_scenario(s, dump_sensors ? &log : nullptr);
    const EnergySummary energy = energy_report(trace, s.power);

    io::write_trace_csv(trace, (dir / "trace.csv").string());
    io::write_text((dir / "latency.csv").string(), io::latency_to_csv(trace));
    if (dump_sensors) io::write_sensor_log(log, (dir / "sensors.csv").string());
    const auto summary = io::run_summary(s, trace, energy);
    write_json(dir / "summary.json", summary);

    std::cout << s.name << " seed " << s.seed << ": rmse " << io::format_double(summary["rmse_cm"].get<double>())
              << " cm, mean sensing power " << io::format_double(energy.mean_power) << " W, saving "
              << io::format_double(energy.saving_pct) << " %\n";
    return 0;
}

int cmd_sweep(const ScenarioSource& src, const std::string& out, int n_seeds, const std::vector<double>& uwb,
              const std::vector<double>& radar) {
    const Scenario s = src.load();
    const fs::path dir = prepare_out(out);
    const SweepSurface sw = frequency_sweep(s, uwb, radar, seeds_for(s, n_seeds));

    std::string runs = "f_uwb,f_radar,seed,rmse_cm,sensing_power_w\n";
    std::string cells = "f_uwb,f_radar,seeds,rmse_mean_cm,rmse_stddev_cm,rmse_stderr_cm,sensing_power_w\n";
    for (const auto& c : sw.cells) {
        const std::string head = io::format_double(c.f_uwb) + "," + io::format_double(c.f_radar) + ",";
        for (std::size_t i = 0; i < c.rmse_cm.size(); ++i)
            runs += head + std::to_string(sw.seeds[i]) + "," + io::format_double(c.rmse_cm[i]) + "," +
                    io::format_double(c.sensing_power) + "\n";
        cells += head + std::to_string(c.rmse_cm.size()) + "," + io::format_double(c.stats.mean) + "," +
                 io::format_double(c.stats.stddev) + "," + io::format_double(c.stats.std_error) + "," +
                 io::format_double(c.sensing_power) + "\n";
    }
    io::write_text((dir / "sweep.csv").string(), runs);
    io::write_text((dir / "sweep_cells.csv").string(), cells);
    write_json(dir / "config.json", io::to_json(s));
    std::cout << "swept " << sw.cells.size() << " cells x " << sw.seeds.size() << " seeds\n";
    return 0;
}

int cmd_compare(const ScenarioSource& src, const std::string& out, int n_seeds,
                const std::vector<std::string>& names) {
    const Scenario s = src.load();
    std::vector<Variant> variants;
    for (const auto& n : names) variants.push_back(variant_from_string(n));
    const auto seeds = seeds_for(s, n_seeds);
    const ComparisonTable table = compare_variants(s, variants, seeds);
    const fs::path dir = prepare_out(out);

    std::string runs = "variant,seed,rmse_cm\n";
    std::string stats = "variant,seeds,rmse_mean_cm,rmse_stddev_cm,rmse_stderr_cm\n";
    for (const auto& r : table.rows) {
        for (std::size_t i = 0; i < r.rmse_cm.size(); ++i)
            runs += to_string(r.variant) + "," + std::to_string(table.seeds[i]) + "," +
                    io::format_double(r.rmse_cm[i]) + "\n";
        stats += to_string(r.variant) + "," + std::to_string(r.rmse_cm.size()) + "," +
                 io::format_double(r.stats.mean) + "," + io::format_double(r.stats.stddev) + "," +
                 io::format_double(r.stats.std_error) + "\n";
        std::cout << to_string(r.variant) << ": " << io::format_double(r.stats.mean) << " cm +- "
                  << io::format_double(r.stats.std_error) << "\n";
    }
    io::write_text((dir / "compare.csv").string(), runs);
    io::write_text((dir / "compare_variants.csv").string(), stats);
    write_json(dir / "config.json", io::to_json(s));
    return 0;
}

int cmd_replay(const ScenarioSource& src, const std::string& log_path, const std::string& out) {
    const Scenario s = src.load();
    validate(s);
    const SensorLog log = io::load_sensor_log(log_path);
    SimulationTrace trace = replay_log(log, s.filter, initial_estimate(s), s.variant);
    trace.meta.scenario = s.name;
    trace.meta.seed = s.seed;
    const fs::path dir = prepare_out(out);

    io::write_trace_csv(trace, (dir / "trace.csv").string());
    io::write_text((dir / "latency.csv").string(), io::latency_to_csv(trace));
    auto summary = io::run_summary(s, trace, std::nullopt);
    summary["log"] = log_path;
    write_json(dir / "summary.json", summary);
    std::cout << "replayed " << trace.size() << " ticks";
    if (summary.contains("rmse_cm")) std::cout << ", rmse " << io::format_double(summary["rmse_cm"].get<double>()) << " cm";
    std::cout << "\n";
    return 0;
}

int cmd_validate(const ScenarioSource& src) {
    const Scenario s = src.load();
    validate(s);
    std::cout << io::to_json(s).dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Localization fusion and adaptive sensing simulator"};
    app.require_subcommand(1);

    ScenarioSource sim_src, sweep_src, cmp_src, replay_src, val_src;
    std::string sim_out, sweep_out, cmp_out, replay_out, log_path;
    bool dump_sensors = false;
    int sweep_seeds = 10, cmp_seeds = 10;
    std::vector<double> grid_uwb{5, 7, 10};
    std::vector<double> grid_radar{4, 8, 16, 32, 64, 130};
    std::vector<std::string> variants{"fused", "imu-uwb", "imu-radar", "imu-only"};

    auto* sim = app.add_subcommand("simulate", "run one scenario and write its trace and summary");
    sim_src.add_to(*sim);
    sim->add_option("--out", sim_out, "output directory")->required();
    sim->add_flag("--dump-sensors", dump_sensors, "also write every sensor sample to sensors.csv");

    auto* sweep = app.add_subcommand("sweep", "fixed-rate grid over UWB and radar frequencies");
    sweep_src.add_to(*sweep);
    sweep->add_option("--out", sweep_out, "output directory")->required();
    sweep->add_option("--seeds", sweep_seeds, "seeds per cell, counting up from the scenario seed");
    sweep->add_option("--grid-uwb", grid_uwb, "UWB frequencies (Hz)")->delimiter(',');
    sweep->add_option("--grid-radar", grid_radar, "radar frequencies (Hz)")->delimiter(',');

    auto* cmp = app.add_subcommand("compare", "paired-seed comparison of fusion variants");
    cmp_src.add_to(*cmp);
    cmp->add_option("--out", cmp_out, "output directory")->required();
    cmp->add_option("--seeds", cmp_seeds, "seeds, counting up from the scenario seed");
    cmp->add_option("--variants", variants, "fused, imu-uwb, imu-radar, imu-only")->delimiter(',');

    auto* replay = app.add_subcommand("replay", "run the filter over a recorded sensor log");
    replay_src.add_to(*replay);
    replay->add_option("--log", log_path, "sensor log CSV")->required();
    replay->add_option("--out", replay_out, "output directory")->required();

    auto* val = app.add_subcommand("validate", "check a scenario and print it fully resolved");
    val_src.add_to(*val);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*sim) return cmd_simulate(sim_src, sim_out, dump_sensors);
        if (*sweep) return cmd_sweep(sweep_src, sweep_out, sweep_seeds, grid_uwb, grid_radar);
        if (*cmp) return cmd_compare(cmp_src, cmp_out, cmp_seeds, variants);
        if (*replay) return cmd_replay(replay_src, log_path, replay_out);
        if (*val) return cmd_validate(val_src);
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const StagingError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 1;
}
