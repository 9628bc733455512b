#pragma once

// Planar position/velocity filter driven by IMU control input and corrected
// by a weighted blend of UWB and radar measurements. State is [x y vx vy],
// the measurement model is the identity.

#include <cmath>
#include <optional>

#include <Eigen/Dense>

#include "locfuse/errors.hpp"

namespace locfuse {

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

struct StateEstimate {
    Vec4 state = Vec4::Zero();  ///< [x y vx vy] in m, m/s
    Mat4 covariance = Mat4::Zero();

    double x() const { return state[0]; }
    double y() const { return state[1]; }
    double vx() const { return state[2]; }
    double vy() const { return state[3]; }
};

struct IMUSample {
    double t = 0.0;      ///< s
    double ax = 0.0;     ///< m/s^2, world frame
    double ay = 0.0;     ///< m/s^2, world frame
    double theta = 0.0;  ///< rad, world heading measured from +y toward +x
};

struct UWBMeasurement {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
    double vx = 0.0;
    double vy = 0.0;
};

struct RadarMeasurement {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
    double vx = 0.0;
    double vy = 0.0;
    /// Distance to the nearest detected object; empty when nothing is in range.
    std::optional<double> distance;
};

struct ControlInput {
    Vec4 u = Vec4::Zero();  ///< [ax, ay, a sin(theta), a cos(theta)]
};

/// UWB share of each fused channel; radar receives the complement.
struct FusionWeights {
    double alpha_x = 0.7;
    double alpha_y = 0.7;
    double beta_x = 0.4;
    double beta_y = 0.4;
};

/// Per-channel variances of a single position/velocity sensor.
struct ChannelVariance {
    double x = 0.0;
    double y = 0.0;
    double vx = 0.0;
    double vy = 0.0;

    Vec4 as_vector() const { return {x, y, vx, vy}; }
};

/// Measurement variances the filter assumes for each sensor.
struct MeasurementNoise {
    ChannelVariance uwb{0.14, 0.06, 0.13, 0.11};
    ChannelVariance radar{0.14, 0.06, 0.13, 0.11};
};

struct MeasurementBundle {
    Vec4 z = Vec4::Zero();
    Mat4 R = Mat4::Zero();
};

struct KalmanIntermediates {
    Vec4 innovation = Vec4::Zero();
    Mat4 S = Mat4::Zero();
    Mat4 K = Mat4::Zero();
};

struct PredictModel {
    double dt = 1e-3;
    Mat4 F = Mat4::Identity();
    Mat4 B = Mat4::Zero();
    Mat4 Q = Mat4::Zero();

    /// Builds F, B and diagonal Q for IMU period `dt`.
    /// `q_diag` is [var(ax), var(ay), var(sin theta), var(cos theta)].
    static PredictModel make(double dt, const Vec4& q_diag) {
        if (!(dt > 0.0)) throw ContractError("predict model requires dt > 0");
        if ((q_diag.array() < 0.0).any()) throw ContractError("process noise must be non-negative");
        PredictModel m;
        m.dt = dt;
        m.F(0, 2) = dt;
        m.F(1, 3) = dt;
        m.B(0, 0) = 0.5 * dt * dt;
        m.B(1, 1) = 0.5 * dt * dt;
        m.B(2, 2) = dt;
        m.B(3, 3) = dt;
        m.Q = q_diag.asDiagonal();
        return m;
    }
};

/// Process noise variances measured for the reference IMU.
inline Vec4 default_process_noise() { return Vec4(2.31e-3, 0.60e-3, 0.32e-3, 0.65e-3); }

inline void symmetrize(Mat4& m) { m = 0.5 * (m + m.transpose()).eval(); }

inline ControlInput control_input_from_imu(const IMUSample& s) {
    const double a = std::hypot(s.ax, s.ay);
    return ControlInput{Vec4(s.ax, s.ay, a * std::sin(s.theta), a * std::cos(s.theta))};
}

inline StateEstimate predict(const StateEstimate& est, const PredictModel& model, const ControlInput& in) {
    if (!(model.dt > 0.0)) throw ContractError("predict requires dt > 0");
    StateEstimate out;
    out.state = model.F * est.state + model.B * in.u;
    out.covariance = model.F * est.covariance * model.F.transpose() + model.Q;
    symmetrize(out.covariance);
    return out;
}

/// Blends whichever of UWB/radar are present into one measurement.
/// A lone sensor gets weight 1 on every channel. Returns nullopt when neither
/// is present, which means the caller skips the update.
///
/// The fused variance follows the linear rule var = w*var_u + (1-w)*var_r
/// rather than the w^2-weighted variance of a weighted mean.
inline std::optional<MeasurementBundle> fuse_measurements(const std::optional<UWBMeasurement>& uwb,
                                                          const std::optional<RadarMeasurement>& radar,
                                                          const FusionWeights& w,
                                                          const MeasurementNoise& noise) {
    if (!uwb && !radar) return std::nullopt;

    Vec4 weights(w.alpha_x, w.alpha_y, w.beta_x, w.beta_y);
    if (!radar) weights.setOnes();
    if (!uwb) weights.setZero();
    if ((weights.array() < 0.0).any() || (weights.array() > 1.0).any())
        throw ContractError("fusion weights must lie in [0, 1]");

    const Vec4 zu = uwb ? Vec4(uwb->x, uwb->y, uwb->vx, uwb->vy) : Vec4::Zero();
    const Vec4 zr = radar ? Vec4(radar->x, radar->y, radar->vx, radar->vy) : Vec4::Zero();
    const Vec4 ones = Vec4::Ones();

    MeasurementBundle m;
    m.z = weights.cwiseProduct(zu) + (ones - weights).cwiseProduct(zr);
    const Vec4 var = weights.cwiseProduct(noise.uwb.as_vector()) +
                     (ones - weights).cwiseProduct(noise.radar.as_vector());
    m.R = var.asDiagonal();
    return m;
}

struct UpdateResult {
    StateEstimate estimate;
    KalmanIntermediates intermediates;
};

/// Kalman correction with H = I. Throws NumericalError if P + R is singular.
inline UpdateResult update(const StateEstimate& pred, const MeasurementBundle& m) {
    UpdateResult r;
    KalmanIntermediates& k = r.intermediates;
    k.innovation = m.z - pred.state;
    k.S = pred.covariance + m.R;

    const Eigen::PartialPivLU<Mat4> lu(k.S);
    const double rcond = lu.rcond();
    if (!(rcond > 1e-14)) throw NumericalError("singular innovation covariance");

    k.K = pred.covariance * lu.inverse();

    r.estimate.state = pred.state + k.K * k.innovation;
    r.estimate.covariance = (Mat4::Identity() - k.K) * pred.covariance;
    symmetrize(r.estimate.covariance);

    if (!r.estimate.state.allFinite() || !r.estimate.covariance.allFinite())
        throw NumericalError("non-finite filter update");
    return r;
}

struct FilterConfig {
    double dt = 1e-3;
    Vec4 process_noise = default_process_noise();
    FusionWeights weights;
    MeasurementNoise noise;
};

/// Initial covariance used when a filter is seeded from a known pose.
inline Mat4 default_initial_covariance() { return Mat4::Identity() * 0.01; }

struct StepOutcome {
    bool used_uwb = false;
    bool used_radar = false;
};

/// IMU-synchronous filter. UWB and radar samples are staged between IMU ticks
/// and consumed by the next `step`; a newer sample from the same sensor
/// replaces an unconsumed older one.
class Filter {
public:
    Filter(const FilterConfig& cfg, const StateEstimate& initial)
        : cfg_(cfg), model_(PredictModel::make(cfg.dt, cfg.process_noise)), est_(initial) {}

    void stage(const UWBMeasurement& m) { pending_uwb_ = m; }
    void stage(const RadarMeasurement& m) { pending_radar_ = m; }

    bool has_pending() const { return pending_uwb_.has_value() || pending_radar_.has_value(); }

    StepOutcome step(const IMUSample& imu) {
        if (pending_uwb_ && pending_uwb_->t > imu.t)
            throw StagingError("UWB sample at t=" + std::to_string(pending_uwb_->t) +
                               " is newer than IMU tick t=" + std::to_string(imu.t));
        if (pending_radar_ && pending_radar_->t > imu.t)
            throw StagingError("radar sample at t=" + std::to_string(pending_radar_->t) +
                               " is newer than IMU tick t=" + std::to_string(imu.t));

        est_ = predict(est_, model_, control_input_from_imu(imu));
        StepOutcome out;
        if (auto m = fuse_measurements(pending_uwb_, pending_radar_, cfg_.weights, cfg_.noise)) {
            est_ = update(est_, *m).estimate;
            out.used_uwb = pending_uwb_.has_value();
            out.used_radar = pending_radar_.has_value();
        }
        pending_uwb_.reset();
        pending_radar_.reset();
        return out;
    }

    const StateEstimate& estimate() const { return est_; }
    const PredictModel& model() const { return model_; }
    const FilterConfig& config() const { return cfg_; }

private:
    FilterConfig cfg_;
    PredictModel model_;
    StateEstimate est_;
    std::optional<UWBMeasurement> pending_uwb_;
    std::optional<RadarMeasurement> pending_radar_;
};

}  // namespace locfuse
