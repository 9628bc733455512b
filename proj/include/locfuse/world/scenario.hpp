#pragma once

// One experiment: track, speed, environment, sensor noise, filter tuning,
// sampling policy and seed, plus the 1 kHz loop that runs it.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "locfuse/adaptive_sensing.hpp"
#include "locfuse/errors.hpp"
#include "locfuse/estimation.hpp"
#include "locfuse/trace.hpp"
#include "locfuse/world/environment.hpp"
#include "locfuse/world/sensors.hpp"
#include "locfuse/world/trajectory.hpp"

namespace locfuse {

/// Which sensor streams reach the filter.
enum class Variant { Fused, ImuUwb, ImuRadar, ImuOnly };

inline std::string to_string(Variant v) {
    switch (v) {
        case Variant::Fused: return "fused";
        case Variant::ImuUwb: return "imu-uwb";
        case Variant::ImuRadar: return "imu-radar";
        case Variant::ImuOnly: return "imu-only";
    }
    return "?";
}

inline Variant variant_from_string(const std::string& s) {
    if (s == "fused") return Variant::Fused;
    if (s == "imu-uwb") return Variant::ImuUwb;
    if (s == "imu-radar") return Variant::ImuRadar;
    if (s == "imu-only") return Variant::ImuOnly;
    throw ConfigError("unknown variant '" + s + "' (expected fused, imu-uwb, imu-radar or imu-only)");
}

inline bool uses_uwb(Variant v) { return v == Variant::Fused || v == Variant::ImuUwb; }
inline bool uses_radar(Variant v) { return v == Variant::Fused || v == Variant::ImuRadar; }

/// Sampling rates used when adaptation is off.
struct FixedRates {
    double uwb = 10.0;
    double radar = 130.0;
};

struct Scenario {
    std::string name = "scenario";
    TrackProfile track = TrackProfile::straight();
    SpeedProfile speed = SpeedProfile::high();
    Environment environment = default_environment(EnvironmentId::E1, TrackProfile::straight());
    SensorNoise noise;
    FilterConfig filter;
    bool asa_enabled = false;
    ASAConfig asa;
    FixedRates rates;
    PowerModel power = default_power_model();
    Variant variant = Variant::Fused;
    std::uint64_t seed = 1;
    std::optional<double> duration;  ///< s; empty means "until the vehicle stops"

    /// Duration actually simulated: explicit, or the traversal time rounded up to a whole tick.
    double resolved_duration() const {
        if (duration) return *duration;
        const double dt = filter.dt;
        return (std::ceil(traversal_time(track, speed) / dt - 1e-9) + 1.0) * dt;
    }
};

inline void check_variance(double v, const std::string& what) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError(what + " must be a finite variance >= 0");
}

inline void check_variances(const ChannelVariance& c, const std::string& what) {
    check_variance(c.x, what + ".x");
    check_variance(c.y, what + ".y");
    check_variance(c.vx, what + ".vx");
    check_variance(c.vy, what + ".vy");
}

/// Throws ConfigError describing the first problem found.
inline void validate(const Scenario& s) {
    if (s.track.kind == TrackKind::Race && s.environment.id == EnvironmentId::E3)
        throw ConfigError("race track in E3 is excluded: the E3 corridor is too narrow for turns");
    if (!(s.speed.cruise_speed > 0.0)) throw ConfigError("speed.cruise_speed must be positive");
    if (!(s.speed.accel_limit > 0.0)) throw ConfigError("speed.accel_limit must be positive");
    if (s.filter.dt != 1e-3) throw ConfigError("the filter runs at the 1 kHz IMU rate (dt = 0.001 s)");

    const Path path = Path::from_track(s.track);
    if (s.track.kind == TrackKind::Race && std::abs(path.length() - s.track.length) > 0.01)
        throw ConfigError("race track loop length mismatch");

    const double duration = s.resolved_duration();
    if (!(duration > 0.0)) throw ConfigError("duration must be positive");
    const double needed = traversal_time(s.track, s.speed);
    if (duration + 1e-9 < needed)
        throw ConfigError("duration " + std::to_string(duration) + " s is shorter than the " +
                          std::to_string(needed) + " s needed to traverse the track");

    // Obstacles must not sit on the path, and the E3 corridor must contain it.
    for (double s_along = 0.0; s_along <= path.length(); s_along += 0.01) {
        const Point2 p = path.at(s_along).position;
        for (const auto& o : s.environment.objects)
            if (std::hypot(p.x - o.center.x, p.y - o.center.y) <= o.radius)
                throw ConfigError("environment object overlaps the track");
        if (s.environment.walls && (p.x < s.environment.walls->x_min || p.x > s.environment.walls->x_max))
            throw ConfigError("track leaves the environment corridor");
    }
    for (const auto& o : s.environment.objects)
        if (!(o.radius > 0.0)) throw ConfigError("object radius must be positive");
    if (!(s.environment.radar_range > 0.0)) throw ConfigError("radar range must be positive");

    check_variance(s.noise.imu.ax, "noise.imu.ax");
    check_variance(s.noise.imu.ay, "noise.imu.ay");
    check_variance(s.noise.imu.sin_theta, "noise.imu.sin_theta");
    check_variance(s.noise.imu.cos_theta, "noise.imu.cos_theta");
    check_variances(s.noise.uwb.white, "noise.uwb.white");
    check_variances(s.noise.uwb.bias.variance, "noise.uwb.bias");
    check_variances(s.noise.radar.white, "noise.radar.white");
    check_variances(s.noise.radar.bias.variance, "noise.radar.bias");
    check_variances(s.noise.shared_bias.variance, "noise.shared_bias");
    for (const BiasNoise* b : {&s.noise.uwb.bias, &s.noise.radar.bias, &s.noise.shared_bias})
        if (!(b->time_constant > 0.0)) throw ConfigError("noise bias time constants must be positive");
    check_variance(s.noise.radar.distance, "noise.radar.distance");
    if (!(s.noise.radar.speed_factor >= 0.0)) throw ConfigError("noise.radar.speed_factor must be >= 0");
    for (int i = 0; i < 4; ++i) check_variance(s.filter.process_noise[i], "noise.filter.process");
    check_variances(s.filter.noise.uwb, "noise.filter.uwb");
    check_variances(s.filter.noise.radar, "noise.filter.radar");

    const FusionWeights& w = s.filter.weights;
    for (double v : {w.alpha_x, w.alpha_y, w.beta_x, w.beta_y})
        if (!(v >= 0.0 && v <= 1.0)) throw ConfigError("fusion weights must lie in [0, 1]");

    validate(s.asa);
    validate(s.power);
    auto in_range = [](double f, const FrequencyRange& r) { return f >= r.min && f <= r.max; };
    if (!in_range(s.rates.uwb, s.power.uwb_range) || !in_range(s.rates.radar, s.power.radar_range))
        throw ConfigError("fixed sampling rates outside the power model range");
    if (s.asa_enabled && (!in_range(s.asa.uwb.f_min, s.power.uwb_range) ||
                          !in_range(s.asa.uwb.f_max, s.power.uwb_range) ||
                          !in_range(s.asa.radar.f_min, s.power.radar_range) ||
                          !in_range(s.asa.radar.f_max, s.power.radar_range)))
        throw ConfigError("adaptive sensing limits outside the power model range");
}

enum class SensorKind { Imu, Uwb, Radar };

/// One row of a recorded sensor stream, optionally with the truth at that time.
struct SensorLogRow {
    SensorKind kind = SensorKind::Imu;
    IMUSample imu;
    UWBMeasurement uwb;
    RadarMeasurement radar;
    std::optional<Pose> truth;

    double t() const {
        switch (kind) {
            case SensorKind::Imu: return imu.t;
            case SensorKind::Uwb: return uwb.t;
            case SensorKind::Radar: return radar.t;
        }
        return 0.0;
    }
};

using SensorLog = std::vector<SensorLogRow>;

/// Filter seed: known start position, zero velocity, small isotropic covariance.
inline StateEstimate initial_estimate(const Scenario& s) {
    StateEstimate e;
    e.state = Vec4(s.track.start.x, s.track.start.y, 0.0, 0.0);
    e.covariance = default_initial_covariance();
    return e;
}

namespace detail {

inline Pose pose_of(const TruthSample& g) { return {g.x, g.y, g.vx, g.vy}; }
inline Pose pose_of(const StateEstimate& e) { return {e.x(), e.y(), e.vx(), e.vy()}; }

inline std::array<double, 4> cov_diag(const StateEstimate& e) {
    return {e.covariance(0, 0), e.covariance(1, 1), e.covariance(2, 2), e.covariance(3, 3)};
}

}  // namespace detail

/// Runs the 1 kHz loop. Per tick: predict/update with the tick's IMU sample
/// and any measurements staged on the previous tick, adapt rates when a full
/// period has elapsed, then emit the sensors that are due. When `dump` is
/// given, every generated sample is appended to it with the truth attached.
inline SimulationTrace run_scenario(const Scenario& s, SensorLog* dump = nullptr) {
    validate(s);
    const double dt = s.filter.dt;
    const GroundTruth truth = gen_trajectory(s.track, s.speed, s.resolved_duration(), dt);

    NoiseStream imu_rng(s.seed, kImuStream);
    NoiseStream uwb_rng(s.seed, kUwbStream);
    NoiseStream radar_rng(s.seed, kRadarStream);
    BiasProcess uwb_bias(s.noise.uwb.bias, dt, s.seed, kUwbBiasStream);
    BiasProcess radar_bias(s.noise.radar.bias, dt, s.seed, kRadarBiasStream);
    BiasProcess shared_bias(s.noise.shared_bias, dt, s.seed, kSharedBiasStream);
    SampleClock uwb_clock;
    SampleClock radar_clock;

    Filter filter(s.filter, initial_estimate(s));
    SamplingState rates = s.asa_enabled ? SamplingState::at_max(s.asa) : SamplingState{s.rates.uwb, s.rates.radar, 0.0};
    const auto period_ticks = static_cast<std::size_t>(std::llround(s.asa.period / dt));

    std::vector<double> headings;
    headings.reserve(truth.size());
    std::optional<double> last_range;

    SimulationTrace trace;
    trace.dt = dt;
    trace.meta.scenario = s.name;
    trace.meta.variant = to_string(s.variant);
    trace.meta.seed = s.seed;
    trace.rows.reserve(truth.size());

    for (std::size_t k = 0; k < truth.size(); ++k) {
        const TruthSample& g = truth[k];
        const IMUSample imu = sample_imu(truth, k, imu_rng, s.noise.imu);
        if (k > 0) {
            uwb_bias.advance();
            radar_bias.advance();
            shared_bias.advance();
        }
        headings.push_back(imu.theta);
        if (dump) dump->push_back({SensorKind::Imu, imu, {}, {}, detail::pose_of(g)});

        TraceRow row;
        if (k > 0) {
            const auto start = std::chrono::steady_clock::now();
            StepOutcome used;
            try {
                used = filter.step(imu);
            } catch (const NumericalError& e) {
                throw NumericalError(e.what(), static_cast<std::int64_t>(k));
            }
            row.step_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            row.uwb_used = used.used_uwb;
            row.radar_used = used.used_radar;
        }

        if (s.asa_enabled && k > 0 && k % period_ticks == 0) {
            const double change = heading_change(headings[k - period_ticks], headings[k]);
            rates = asa_step(rates, s.asa, change, last_range, g.t);
        }

        if (uwb_clock.tick(rates.f_uwb, dt)) {
            const Vec4 bias = uwb_bias.value() + shared_bias.value();
            const UWBMeasurement m = sample_uwb(truth, k, uwb_rng, s.noise.uwb.white, &bias);
            if (uses_uwb(s.variant)) filter.stage(m);
            if (dump) dump->push_back({SensorKind::Uwb, {}, m, {}, detail::pose_of(g)});
        }
        if (radar_clock.tick(rates.f_radar, dt)) {
            const Vec4 bias = radar_bias.value() + shared_bias.value();
            const RadarMeasurement m = sample_radar(truth, s.environment, k, radar_rng, s.noise.radar, &bias);
            last_range = m.distance;
            if (uses_radar(s.variant)) filter.stage(m);
            if (dump) dump->push_back({SensorKind::Radar, {}, {}, m, detail::pose_of(g)});
        }

        row.t = g.t;
        row.truth = detail::pose_of(g);
        row.estimate = detail::pose_of(filter.estimate());
        row.cov_diag = detail::cov_diag(filter.estimate());
        row.f_uwb = rates.f_uwb;
        row.f_radar = rates.f_radar;
        row.sensing_power = sensing_power(rates.f_uwb, rates.f_radar, s.power);
        trace.rows.push_back(row);
    }
    return trace;
}

/// Runs the filter over a recorded stream. The first IMU row seeds the
/// filter at `initial`; each later IMU row is one predict/update tick that
/// consumes the UWB/radar rows seen since the previous IMU row. Truth columns,
/// when every IMU row has them, are copied into the trace.
inline SimulationTrace replay_log(const SensorLog& log, const FilterConfig& cfg, const StateEstimate& initial,
                                  Variant variant = Variant::Fused) {
    SimulationTrace trace;
    trace.dt = cfg.dt;
    trace.meta.variant = to_string(variant);
    trace.has_truth = true;

    Filter filter(cfg, initial);
    bool seeded = false;
    for (std::size_t i = 0; i < log.size(); ++i) {
        const SensorLogRow& r = log[i];
        if (r.kind == SensorKind::Uwb) {
            if (uses_uwb(variant)) filter.stage(r.uwb);
            continue;
        }
        if (r.kind == SensorKind::Radar) {
            if (uses_radar(variant)) filter.stage(r.radar);
            continue;
        }
        TraceRow row;
        if (seeded) {
            const auto start = std::chrono::steady_clock::now();
            StepOutcome used;
            try {
                used = filter.step(r.imu);
            } catch (const NumericalError& e) {
                throw NumericalError(e.what(), static_cast<std::int64_t>(trace.rows.size()));
            }
            row.step_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            row.uwb_used = used.used_uwb;
            row.radar_used = used.used_radar;
        }
        seeded = true;
        row.t = r.imu.t;
        if (r.truth) row.truth = *r.truth;
        else trace.has_truth = false;
        row.estimate = detail::pose_of(filter.estimate());
        row.cov_diag = detail::cov_diag(filter.estimate());
        trace.rows.push_back(row);
    }
    if (!seeded) trace.has_truth = false;
    return trace;
}

}  // namespace locfuse
