#pragma once

// Ground-truth vehicle motion along a straight segment or a stadium-shaped
// race loop, driven with a trapezoidal speed profile and sampled at 1 kHz.
//
// Heading theta is measured from the +y axis toward +x, so the direction of
// travel is (sin theta, cos theta). Right turns increase theta.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "locfuse/errors.hpp"

namespace locfuse {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

enum class TrackKind { Straight, Race };

struct TrackProfile {
    TrackKind kind = TrackKind::Straight;
    Point2 start{0.0, 0.0};
    Point2 end{0.0, 4.0};     ///< straight only
    double length = 14.0;     ///< race only: closed loop length, m
    double turn_radius = 0.6; ///< race only, m

    static TrackProfile straight(Point2 from = {0.0, 0.0}, Point2 to = {0.0, 4.0}) {
        TrackProfile t;
        t.kind = TrackKind::Straight;
        t.start = from;
        t.end = to;
        return t;
    }
    static TrackProfile race(double length = 14.0, double turn_radius = 0.6, Point2 start = {0.0, 0.0}) {
        TrackProfile t;
        t.kind = TrackKind::Race;
        t.start = start;
        t.length = length;
        t.turn_radius = turn_radius;
        return t;
    }
};

inline constexpr double kmph_to_mps(double kmph) { return kmph / 3.6; }

struct SpeedProfile {
    double cruise_speed = kmph_to_mps(4.0);  ///< m/s
    double accel_limit = 0.5;                ///< m/s^2

    static SpeedProfile low() { return {kmph_to_mps(1.2), 0.5}; }
    static SpeedProfile high() { return {kmph_to_mps(4.0), 0.5}; }
};

struct TruthSample {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
    double vx = 0.0;
    double vy = 0.0;
    double ax = 0.0;
    double ay = 0.0;
    double theta = 0.0;
};

struct GroundTruth {
    double dt = 1e-3;
    double traversal_time = 0.0;  ///< s until the vehicle comes to rest
    std::vector<TruthSample> samples;

    std::size_t size() const { return samples.size(); }
    const TruthSample& operator[](std::size_t k) const { return samples[k]; }
};

/// Arc-length parametrised path made of straight and constant-curvature pieces.
class Path {
public:
    struct Segment {
        Point2 origin;
        double heading = 0.0;    ///< at segment start
        double curvature = 0.0;  ///< d(theta)/ds, 0 for straight
        double length = 0.0;
    };

    struct Point {
        Point2 position;
        double heading = 0.0;
        double curvature = 0.0;
    };

    static Path from_track(const TrackProfile& track) {
        Path p;
        if (track.kind == TrackKind::Straight) {
            const double dx = track.end.x - track.start.x;
            const double dy = track.end.y - track.start.y;
            const double len = std::hypot(dx, dy);
            if (!(len > 0.0)) throw ConfigError("straight track endpoints must differ");
            p.append_line(track.start, std::atan2(dx, dy), len);
            return p;
        }
        const double r = track.turn_radius;
        if (!(r > 0.0)) throw ConfigError("race track turn radius must be positive");
        const double straight = 0.5 * (track.length - 2.0 * std::numbers::pi * r);
        if (!(straight > 0.0)) throw ConfigError("race track too short for its turn radius");
        // Up the left straight, right half-turn, down the right straight, right half-turn home.
        Point2 at = track.start;
        double heading = 0.0;
        for (int lap_half = 0; lap_half < 2; ++lap_half) {
            p.append_line(at, heading, straight);
            at = p.end_point().position;
            p.append_arc(at, heading, 1.0 / r, std::numbers::pi * r);
            at = p.end_point().position;
            heading += std::numbers::pi;
        }
        return p;
    }

    double length() const { return total_; }
    const std::vector<Segment>& segments() const { return segs_; }

    Point at(double s) const {
        s = std::clamp(s, 0.0, total_);
        double s0 = 0.0;
        for (std::size_t i = 0; i < segs_.size(); ++i) {
            const Segment& g = segs_[i];
            if (s <= s0 + g.length || i + 1 == segs_.size()) return eval(g, s - s0);
            s0 += g.length;
        }
        return {};
    }

    Point end_point() const { return eval(segs_.back(), segs_.back().length); }

private:
    static Point eval(const Segment& g, double s) {
        Point p;
        p.curvature = g.curvature;
        p.heading = g.heading + g.curvature * s;
        if (g.curvature == 0.0) {
            p.position = {g.origin.x + s * std::sin(g.heading), g.origin.y + s * std::cos(g.heading)};
        } else {
            const double k = g.curvature;
            p.position = {g.origin.x + (std::cos(g.heading) - std::cos(p.heading)) / k,
                          g.origin.y + (std::sin(p.heading) - std::sin(g.heading)) / k};
        }
        return p;
    }

    void append_line(Point2 origin, double heading, double length) {
        segs_.push_back({origin, heading, 0.0, length});
        total_ += length;
    }
    void append_arc(Point2 origin, double heading, double curvature, double length) {
        segs_.push_back({origin, heading, curvature, length});
        total_ += length;
    }

    std::vector<Segment> segs_;
    double total_ = 0.0;
};

/// Trapezoidal (or triangular, for short paths) distance-vs-time profile.
class SpeedRamp {
public:
    SpeedRamp(double distance, const SpeedProfile& speed) : distance_(distance), accel_(speed.accel_limit) {
        if (speed.cruise_speed < 0.0) throw ConfigError("cruise speed must be non-negative");
        if (speed.cruise_speed == 0.0 || distance == 0.0) return;
        if (!(speed.accel_limit > 0.0)) throw ConfigError("acceleration limit must be positive");
        peak_ = std::min(speed.cruise_speed, std::sqrt(distance * accel_));
        ramp_time_ = peak_ / accel_;
        const double ramp_dist = 0.5 * peak_ * ramp_time_;
        cruise_time_ = (distance - 2.0 * ramp_dist) / peak_;
        moving_ = true;
    }

    double duration() const { return moving_ ? 2.0 * ramp_time_ + cruise_time_ : 0.0; }

    struct Kinematics {
        double s = 0.0;
        double v = 0.0;
        double a = 0.0;
    };

    Kinematics at(double t) const {
        if (!moving_ || t <= 0.0) return {0.0, 0.0, 0.0};
        const double t1 = ramp_time_;
        const double t2 = ramp_time_ + cruise_time_;
        const double t3 = duration();
        if (t < t1) return {0.5 * accel_ * t * t, accel_ * t, accel_};
        const double s1 = 0.5 * accel_ * t1 * t1;
        if (t < t2) return {s1 + peak_ * (t - t1), peak_, 0.0};
        if (t < t3) {
            const double tau = t - t2;
            return {s1 + peak_ * cruise_time_ + peak_ * tau - 0.5 * accel_ * tau * tau, peak_ - accel_ * tau,
                    -accel_};
        }
        return {distance_, 0.0, 0.0};
    }

private:
    double distance_ = 0.0;
    double accel_ = 0.0;
    double peak_ = 0.0;
    double ramp_time_ = 0.0;
    double cruise_time_ = 0.0;
    bool moving_ = false;
};

/// Time needed to drive the whole track and come to rest.
inline double traversal_time(const TrackProfile& track, const SpeedProfile& speed) {
    return SpeedRamp(Path::from_track(track).length(), speed).duration();
}

/// Samples the track at `dt` for `duration` seconds (ticks 0 .. duration/dt - 1).
/// Zero cruise speed yields a stationary vehicle at the track start.
inline GroundTruth gen_trajectory(const TrackProfile& track, const SpeedProfile& speed, double duration,
                                  double dt = 1e-3) {
    if (speed.cruise_speed < 0.0) throw ConfigError("cruise speed must be non-negative");
    if (!(duration > 0.0)) throw ConfigError("duration must be positive");
    if (!(dt > 0.0)) throw ConfigError("tick period must be positive");

    const Path path = Path::from_track(track);
    const SpeedRamp ramp(path.length(), speed);

    GroundTruth g;
    g.dt = dt;
    g.traversal_time = ramp.duration();
    const auto n = static_cast<std::size_t>(std::llround(duration / dt));
    if (n == 0) throw ConfigError("duration shorter than one tick");
    g.samples.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * dt;
        const auto kin = ramp.at(t);
        const auto pt = path.at(kin.s);
        const double sh = std::sin(pt.heading);
        const double ch = std::cos(pt.heading);
        const double centripetal = pt.curvature * kin.v * kin.v;
        TruthSample s;
        s.t = t;
        s.x = pt.position.x;
        s.y = pt.position.y;
        s.vx = kin.v * sh;
        s.vy = kin.v * ch;
        // Tangential along (sin, cos); centripetal along the right-hand normal (cos, -sin).
        s.ax = kin.a * sh + centripetal * ch;
        s.ay = kin.a * ch - centripetal * sh;
        s.theta = pt.heading;
        g.samples.push_back(s);
    }
    return g;
}

}  // namespace locfuse
