#pragma once

// Event-driven sampling-rate adaptation for UWB and radar, and the affine
// sensing power model used to account for its energy savings.
//
// Once per adaptation period each sensor's rate is either decayed (orientation
// steady) or escalated in two stages, first to the threshold rate gamma and
// then to the maximum (orientation changing). A nearby object then forces the
// radar to its maximum rate.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "locfuse/errors.hpp"
#include "locfuse/trace.hpp"

namespace locfuse {

/// Rate limits and decay law for one sensor. Decay is f <- slope * f + offset.
struct SensorRateLimits {
    double f_min = 0.0;
    double f_max = 0.0;
    double gamma = 0.0;
    double slope = 1.0;
    double offset = 0.0;
};

struct ASAConfig {
    double theta_threshold = 10.0 * std::numbers::pi / 180.0;  ///< rad
    double proximity_threshold = 1.0;                           ///< m
    double period = 1.0;                                        ///< s
    SensorRateLimits uwb{5.0, 10.0, 7.0, 1.0, -1.0};
    SensorRateLimits radar{4.0, 130.0, 16.0, 0.5, 0.0};
};

inline void validate(const SensorRateLimits& s, const std::string& name) {
    if (!(s.f_min > 0.0)) throw ConfigError(name + ": f_min must be positive");
    if (!(s.f_min < s.gamma && s.gamma < s.f_max))
        throw ConfigError(name + ": require f_min < gamma < f_max");
    if (!(s.slope >= 0.0)) throw ConfigError(name + ": decay slope must be non-negative");
    // Decay must not raise the rate anywhere on (f_min, gamma].
    if (s.slope * s.gamma + s.offset > s.gamma || s.slope * s.f_min + s.offset > s.f_min)
        throw ConfigError(name + ": decay law must not increase the rate");
}

inline void validate(const ASAConfig& cfg) {
    if (!(cfg.period > 0.0)) throw ConfigError("asa: period must be positive");
    if (!(cfg.theta_threshold > 0.0)) throw ConfigError("asa: orientation threshold must be positive");
    if (!(cfg.proximity_threshold >= 0.0)) throw ConfigError("asa: proximity threshold must be >= 0");
    validate(cfg.uwb, "asa.uwb");
    validate(cfg.radar, "asa.radar");
}

struct SamplingState {
    double f_uwb = 10.0;
    double f_radar = 130.0;
    double last_adapt_t = 0.0;

    static SamplingState at_max(const ASAConfig& cfg, double t0 = 0.0) {
        return {cfg.uwb.f_max, cfg.radar.f_max, t0};
    }
};

namespace detail {

inline double adapt_rate(double f, const SensorRateLimits& lim, bool turning) {
    if (!turning) {
        if (lim.f_min < f && f <= lim.gamma) return std::max(lim.slope * f + lim.offset, lim.f_min);
        if (f == lim.f_max) return lim.gamma;
        if (f > lim.gamma && f < lim.f_max)
            throw ContractError("sampling rate strictly between gamma and f_max has no decay rule");
        return f;  // at f_min
    }
    if (lim.f_min <= f && f < lim.gamma) return lim.gamma;
    return lim.f_max;
}

}  // namespace detail

/// Smallest absolute angle between two headings, in [0, pi].
inline double heading_change(double from, double to) {
    return std::abs(std::remainder(to - from, 2.0 * std::numbers::pi));
}

/// One adaptation step. `orientation_change` is |delta theta| over the last
/// period; `distance` is the radar's nearest-object range, empty when nothing
/// is in range.
inline SamplingState asa_step(const SamplingState& state, const ASAConfig& cfg, double orientation_change,
                              std::optional<double> distance, double now) {
    // Tolerate one ulp-scale drift in accumulated tick times.
    if (now + 1e-9 < state.last_adapt_t + cfg.period)
        throw ContractError("asa_step called before the adaptation period elapsed");

    const bool turning = !(orientation_change < cfg.theta_threshold);
    SamplingState next = state;
    next.f_uwb = detail::adapt_rate(state.f_uwb, cfg.uwb, turning);
    next.f_radar = detail::adapt_rate(state.f_radar, cfg.radar, turning);
    if (distance && *distance < cfg.proximity_threshold) next.f_radar = cfg.radar.f_max;
    next.last_adapt_t = now;
    return next;
}

struct AffinePower {
    double intercept = 0.0;  ///< W
    double slope = 0.0;      ///< W per Hz (UWB) or W per log2(Hz) (radar)
};

struct FrequencyRange {
    double min = 0.0;
    double max = 0.0;
};

/// Sensing power: constant IMU draw, UWB affine in f, radar affine in log2(f).
struct PowerModel {
    double imu = 0.01289;
    AffinePower uwb;
    AffinePower radar;
    double base = 0.0;  ///< non-sensing system draw, reported separately
    FrequencyRange uwb_range{1.0, 10.0};
    FrequencyRange radar_range{1.0, 130.0};

    double uwb_power(double f) const { return uwb.intercept + uwb.slope * f; }
    double radar_power(double f) const { return radar.intercept + radar.slope * std::log2(f); }
};

struct PowerAnchor {
    double frequency = 0.0;  ///< Hz
    double power = 0.0;      ///< W
};

/// Fits the affine model through each sensor's max-rate anchor so that
/// sensing power at (uwb_low_f, radar_low_f) is `(1 - saving)` of the max-rate
/// sensing power. The saving is split between UWB and radar in proportion to
/// their max-rate power.
inline PowerModel calibrate_power_model(double imu_power, PowerAnchor uwb_max, PowerAnchor radar_max,
                                        double uwb_low_f, double radar_low_f, double saving) {
    if (!(uwb_low_f < uwb_max.frequency) || !(radar_low_f < radar_max.frequency))
        throw ConfigError("power calibration requires low anchors below the max-rate anchors");
    const double total = imu_power + uwb_max.power + radar_max.power;
    const double share = saving * total / (uwb_max.power + radar_max.power);

    PowerModel m;
    m.imu = imu_power;
    m.uwb.slope = share * uwb_max.power / (uwb_max.frequency - uwb_low_f);
    m.uwb.intercept = uwb_max.power - m.uwb.slope * uwb_max.frequency;
    m.radar.slope = share * radar_max.power / std::log2(radar_max.frequency / radar_low_f);
    m.radar.intercept = radar_max.power - m.radar.slope * std::log2(radar_max.frequency);
    m.uwb_range = {1.0, uwb_max.frequency};
    m.radar_range = {1.0, radar_max.frequency};
    return m;
}

/// Reference hardware: UWB 0.67 W at 10 Hz, radar 1.92 W at 130 Hz, IMU
/// 12.89 mW, and an 18% saving at the threshold rates (7 Hz, 16 Hz).
inline PowerModel default_power_model() {
    return calibrate_power_model(0.01289, {10.0, 0.67}, {130.0, 1.92}, 7.0, 16.0, 0.18);
}

inline void validate(const PowerModel& m) {
    if (!(m.imu >= 0.0) || !(m.base >= 0.0)) throw ConfigError("power_model: constant draws must be >= 0");
    if (!(m.uwb.slope >= 0.0) || !(m.radar.slope >= 0.0))
        throw ConfigError("power_model: slopes must be >= 0 (power non-decreasing in frequency)");
    if (!(m.uwb_range.min > 0.0 && m.uwb_range.min < m.uwb_range.max) ||
        !(m.radar_range.min > 0.0 && m.radar_range.min < m.radar_range.max))
        throw ConfigError("power_model: invalid frequency range");
    if (m.uwb_power(m.uwb_range.min) < 0.0 || m.radar_power(m.radar_range.min) < 0.0)
        throw ConfigError("power_model: negative power inside the frequency range");
}

inline double sensing_power(double f_uwb, double f_radar, const PowerModel& m) {
    if (!(f_uwb >= m.uwb_range.min && f_uwb <= m.uwb_range.max))
        throw ContractError("UWB frequency " + std::to_string(f_uwb) + " Hz outside the power model range");
    if (!(f_radar >= m.radar_range.min && f_radar <= m.radar_range.max))
        throw ContractError("radar frequency " + std::to_string(f_radar) + " Hz outside the power model range");
    return m.imu + m.uwb_power(f_uwb) + m.radar_power(f_radar);
}

struct EnergySummary {
    double energy = 0.0;           ///< J of sensing energy
    double mean_power = 0.0;       ///< W
    double baseline_energy = 0.0;  ///< J at constant max rates over the same duration
    double saving_pct = 0.0;
    double duration = 0.0;         ///< s
};

/// Integrates per-tick sensing power over the trace and compares it with
/// running both sensors at the model's maximum rates.
inline EnergySummary energy_report(const SimulationTrace& trace, const PowerModel& model) {
    if (trace.empty()) throw ContractError("energy report needs a non-empty trace");
    EnergySummary s;
    const double baseline_power = sensing_power(model.uwb_range.max, model.radar_range.max, model);
    for (const auto& row : trace.rows) {
        s.energy += sensing_power(row.f_uwb, row.f_radar, model) * trace.dt;
        s.baseline_energy += baseline_power * trace.dt;
    }
    s.duration = static_cast<double>(trace.size()) * trace.dt;
    s.mean_power = s.energy / s.duration;
    s.saving_pct = 100.0 * (s.baseline_energy - s.energy) / s.baseline_energy;
    return s;
}

}  // namespace locfuse
