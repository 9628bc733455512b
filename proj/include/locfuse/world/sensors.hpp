#pragma once

// Noisy IMU, UWB and radar observations of the ground truth.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "locfuse/estimation.hpp"
#include "locfuse/world/environment.hpp"
#include "locfuse/world/trajectory.hpp"

namespace locfuse {

/// IMU noise variances: accelerometer axes and the sin/cos heading channels.
struct ImuNoise {
    double ax = 2.31e-3;
    double ay = 0.60e-3;
    double sin_theta = 0.32e-3;
    double cos_theta = 0.65e-3;

    Vec4 as_vector() const { return {ax, ay, sin_theta, cos_theta}; }
};

/// Steady-state variance and correlation time of a first-order Gauss-Markov process.
struct BiasNoise {
    ChannelVariance variance;
    double time_constant = 3.0;  ///< s
};

/// Position/velocity sensor error: white noise per sample plus an optional
/// sensor-specific slowly varying bias.
struct PositionSensorNoise {
    ChannelVariance white;
    BiasNoise bias;
};

struct RadarNoise : PositionSensorNoise {
    double distance = 0.0;  ///< variance of the nearest-object range, m^2
    /// Optional fractional variance reduction per m/s of speed; 0 disables it.
    double speed_factor = 0.0;
};

/// Variances of the simulated sensors (what the world does, not what the
/// filter assumes). `shared_bias` is a slowly varying site error seen
/// identically by UWB and radar; it sets an accuracy floor that no sampling
/// rate can average away.
struct SensorNoise {
    ImuNoise imu;
    PositionSensorNoise uwb{{4e-4, 4e-4, 4.9e-3, 4.9e-3}, {}};
    RadarNoise radar{{{4e-4, 4e-4, 4.9e-3, 4.9e-3}, {}}, 0.0, 0.0};
    BiasNoise shared_bias;

    static SensorNoise noiseless() {
        SensorNoise n;
        n.imu = {0.0, 0.0, 0.0, 0.0};
        n.uwb = {};
        n.radar = {};
        n.shared_bias = {};
        return n;
    }
};

/// Independent normal stream for one sensor. Streams for different sensors
/// never share state, so dropping one sensor's samples leaves the others
/// unchanged.
class NoiseStream {
public:
    NoiseStream(std::uint64_t seed, std::uint32_t stream_id) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stream_id,
                          0x9e3779b9u};
        engine_.seed(seq);
    }

    /// Zero-mean draw with the given variance; returns exactly 0 for zero variance.
    double gaussian(double variance) {
        const double z = normal_(engine_);
        return variance > 0.0 ? std::sqrt(variance) * z : 0.0;
    }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

enum SensorStream : std::uint32_t {
    kImuStream = 1,
    kUwbStream = 2,
    kRadarStream = 3,
    kUwbBiasStream = 4,
    kRadarBiasStream = 5,
    kSharedBiasStream = 6,
};

/// Four-channel Gauss-Markov bias advanced once per simulator tick, so its
/// realisation does not depend on the sensor's sampling rate.
class BiasProcess {
public:
    BiasProcess(const BiasNoise& noise, double dt, std::uint64_t seed, std::uint32_t stream)
        : rng_(seed, stream), variance_(noise.variance.as_vector()) {
        if (variance_.isZero(0.0)) return;
        if (!(noise.time_constant > 0.0)) throw ConfigError("bias time constant must be positive");
        decay_ = std::exp(-dt / noise.time_constant);
        for (int i = 0; i < 4; ++i) value_[i] = rng_.gaussian(variance_[i]);
        active_ = true;
    }

    void advance() {
        if (!active_) return;
        const double drive = 1.0 - decay_ * decay_;
        for (int i = 0; i < 4; ++i) value_[i] = decay_ * value_[i] + rng_.gaussian(drive * variance_[i]);
    }

    const Vec4& value() const { return value_; }

private:
    NoiseStream rng_;
    Vec4 variance_;
    Vec4 value_ = Vec4::Zero();
    double decay_ = 0.0;
    bool active_ = false;
};

inline IMUSample sample_imu(const GroundTruth& truth, std::size_t k, NoiseStream& rng, const ImuNoise& noise) {
    const TruthSample& g = truth[k];
    IMUSample s;
    s.t = g.t;
    s.ax = g.ax + rng.gaussian(noise.ax);
    s.ay = g.ay + rng.gaussian(noise.ay);
    const double ns = rng.gaussian(noise.sin_theta);
    const double nc = rng.gaussian(noise.cos_theta);
    if (noise.sin_theta == 0.0 && noise.cos_theta == 0.0) {
        s.theta = g.theta;
    } else {
        // Heading from the noisy sin/cos pair, kept on the truth's branch so the stream stays continuous.
        const double measured = std::atan2(std::sin(g.theta) + ns, std::cos(g.theta) + nc);
        s.theta = g.theta + std::remainder(measured - g.theta, 2.0 * std::numbers::pi);
    }
    return s;
}

/// Truth plus white noise plus the current bias (zero when `bias` is null).
inline UWBMeasurement sample_uwb(const GroundTruth& truth, std::size_t k, NoiseStream& rng,
                                 const ChannelVariance& white, const Vec4* bias = nullptr) {
    const TruthSample& g = truth[k];
    const Vec4 b = bias ? *bias : Vec4::Zero();
    UWBMeasurement m;
    m.t = g.t;
    m.x = g.x + b[0] + rng.gaussian(white.x);
    m.y = g.y + b[1] + rng.gaussian(white.y);
    m.vx = g.vx + b[2] + rng.gaussian(white.vx);
    m.vy = g.vy + b[3] + rng.gaussian(white.vy);
    return m;
}

inline RadarMeasurement sample_radar(const GroundTruth& truth, const Environment& env, std::size_t k,
                                     NoiseStream& rng, const RadarNoise& noise, const Vec4* bias = nullptr) {
    const TruthSample& g = truth[k];
    const Vec4 b = bias ? *bias : Vec4::Zero();
    double scale = 1.0;
    if (noise.speed_factor > 0.0)
        scale = std::max(0.1, 1.0 - noise.speed_factor * std::hypot(g.vx, g.vy));
    RadarMeasurement m;
    m.t = g.t;
    m.x = g.x + b[0] + rng.gaussian(scale * noise.white.x);
    m.y = g.y + b[1] + rng.gaussian(scale * noise.white.y);
    m.vx = g.vx + b[2] + rng.gaussian(scale * noise.white.vx);
    m.vy = g.vy + b[3] + rng.gaussian(scale * noise.white.vy);
    const double range_noise = rng.gaussian(noise.distance);
    if (auto d = env.nearest_object({g.x, g.y})) m.distance = std::max(*d + range_noise, 1e-3);
    return m;
}

/// Decides on which ticks a sensor running at a (possibly changing) rate fires.
/// Sample instants are snapped to the tick grid, so over any window at a
/// constant rate f the count is f * window +- 1.
class SampleClock {
public:
    bool tick(double frequency, double dt) {
        phase_ += frequency * dt;
        if (phase_ >= 1.0 - 1e-9) {
            phase_ -= 1.0;
            if (phase_ < 0.0) phase_ = 0.0;
            return true;
        }
        return false;
    }

private:
    double phase_ = 0.0;
};

}  // namespace locfuse
