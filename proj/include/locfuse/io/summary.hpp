#pragma once

// Run summary JSON. `config` holds the fully resolved scenario, so the
// summary alone is enough to repeat the run.

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "locfuse/adaptive_sensing.hpp"
#include "locfuse/io/scenario_file.hpp"
#include "locfuse/metrics.hpp"

namespace locfuse::io {

inline ordered_json latency_json(const LatencyProfile& p) {
    return {{"mean_ms", p.mean_ms}, {"min_ms", p.min_ms}, {"p50_ms", p.p50_ms},
            {"p99_ms", p.p99_ms},   {"max_ms", p.max_ms}, {"samples", p.samples}};
}

/// `energy` is omitted for replays, where the sampling rates are not known.
inline ordered_json run_summary(const Scenario& s, const SimulationTrace& trace,
                                const std::optional<EnergySummary>& energy) {
    ordered_json j;
    j["schema_version"] = kTraceSchemaVersion;
    j["code_version"] = kCodeVersion;
    j["scenario"] = s.name;
    j["variant"] = to_string(s.variant);
    j["seed"] = s.seed;
    j["ticks"] = trace.size();
    j["duration_s"] = trace.empty() ? 0.0 : trace.rows.back().t - trace.rows.front().t;
    if (trace.has_truth && !trace.empty()) j["rmse_cm"] = rmse_cm(trace);
    if (energy) {
        j["mean_power_w"] = energy->mean_power;
        j["energy_j"] = energy->energy;
        j["baseline_energy_j"] = energy->baseline_energy;
        j["saving_pct"] = energy->saving_pct;
    }
    j["latency"] = latency_json(latency_profile(trace));
    j["config"] = to_json(s);
    return j;
}

}  // namespace locfuse::io
