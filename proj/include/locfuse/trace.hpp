#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace locfuse {

inline constexpr int kTraceSchemaVersion = 1;
inline constexpr const char* kCodeVersion = "0.3.0";

struct Pose {
    double x = 0.0;
    double y = 0.0;
    double vx = 0.0;
    double vy = 0.0;
};

/// One simulator tick.
struct TraceRow {
    double t = 0.0;
    Pose truth;
    Pose estimate;
    std::array<double, 4> cov_diag{};  ///< diagonal of the state covariance
    double f_uwb = 0.0;                ///< Hz
    double f_radar = 0.0;              ///< Hz
    double sensing_power = 0.0;        ///< W
    double step_time = 0.0;            ///< s of wall-clock filter compute
    bool uwb_used = false;
    bool radar_used = false;

    /// Field-wise equality of everything except the wall-clock step time.
    bool same_outputs(const TraceRow& o) const {
        return t == o.t && truth.x == o.truth.x && truth.y == o.truth.y && truth.vx == o.truth.vx &&
               truth.vy == o.truth.vy && estimate.x == o.estimate.x && estimate.y == o.estimate.y &&
               estimate.vx == o.estimate.vx && estimate.vy == o.estimate.vy && cov_diag == o.cov_diag &&
               f_uwb == o.f_uwb && f_radar == o.f_radar && sensing_power == o.sensing_power &&
               uwb_used == o.uwb_used && radar_used == o.radar_used;
    }
};

struct TraceMetadata {
    std::string scenario;
    std::string variant;
    std::uint64_t seed = 0;
    std::string code_version = kCodeVersion;
};

struct SimulationTrace {
    TraceMetadata meta;
    double dt = 1e-3;
    bool has_truth = true;
    std::vector<TraceRow> rows;

    bool empty() const { return rows.empty(); }
    std::size_t size() const { return rows.size(); }

    bool same_outputs(const SimulationTrace& o) const {
        if (rows.size() != o.rows.size()) return false;
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (!rows[i].same_outputs(o.rows[i])) return false;
        return true;
    }
};

}  // namespace locfuse
