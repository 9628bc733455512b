#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "locfuse/errors.hpp"
#include "locfuse/world/trajectory.hpp"

namespace locfuse {

enum class EnvironmentId { E1, E2, E3 };

inline std::string to_string(EnvironmentId id) {
    switch (id) {
        case EnvironmentId::E1: return "E1";
        case EnvironmentId::E2: return "E2";
        case EnvironmentId::E3: return "E3";
    }
    return "?";
}

inline EnvironmentId environment_from_string(const std::string& s) {
    if (s == "E1") return EnvironmentId::E1;
    if (s == "E2") return EnvironmentId::E2;
    if (s == "E3") return EnvironmentId::E3;
    throw ConfigError("unknown environment '" + s + "' (expected E1, E2 or E3)");
}

/// Circular obstacle.
struct Obstacle {
    Point2 center;
    double radius = 0.0;
};

/// Lateral corridor limits (E3).
struct Corridor {
    double x_min = 0.0;
    double x_max = 0.0;
};

struct Environment {
    EnvironmentId id = EnvironmentId::E1;
    std::vector<Obstacle> objects;
    std::optional<Corridor> walls;
    double radar_range = 5.0;  ///< m

    /// Distance from `p` to the nearest obstacle boundary within radar range.
    std::optional<double> nearest_object(Point2 p) const {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& o : objects) {
            const double d = std::hypot(p.x - o.center.x, p.y - o.center.y) - o.radius;
            best = std::min(best, d);
        }
        if (!(best <= radar_range)) return std::nullopt;
        return best;
    }
};

/// Built-in layouts. E1 is sparse with large objects, E2 is cluttered close
/// to the path, E3 is an empty narrow corridor (straight track only).
inline Environment default_environment(EnvironmentId id, const TrackProfile& track) {
    Environment env;
    env.id = id;
    if (track.kind == TrackKind::Race) {
        const double r = track.turn_radius;
        const double straight = 0.5 * (track.length - 2.0 * std::numbers::pi * r);
        const double x0 = track.start.x;
        const double y0 = track.start.y;
        switch (id) {
            case EnvironmentId::E1:
                // Beside the first straight and beyond each turn, 0.95 m clear of the path.
                env.objects = {{{x0 - 1.45, y0 + 0.5 * straight}, 0.5},
                               {{x0 + r, y0 + straight + r + 1.45}, 0.5},
                               {{x0 + r, y0 - r - 1.45}, 0.5}};
                break;
            case EnvironmentId::E2:
                env.objects = {{{x0 - 0.7, y0 + 0.2 * straight}, 0.2},  {{x0 - 0.75, y0 + 0.6 * straight}, 0.25},
                               {{x0 + r, y0 + straight + r + 0.7}, 0.2}, {{x0 + 2.0 * r + 0.7, y0 + 0.8 * straight}, 0.2},
                               {{x0 + 2.0 * r + 0.75, y0 + 0.3 * straight}, 0.25}, {{x0 + r, y0 - r - 0.7}, 0.2},
                               {{x0 + r, y0 + 0.5 * straight}, 0.3}};
                break;
            case EnvironmentId::E3: break;
        }
        return env;
    }

    // Straight track: place objects relative to the segment's local frame.
    const double dx = track.end.x - track.start.x;
    const double dy = track.end.y - track.start.y;
    const double len = std::hypot(dx, dy);
    const double ux = len > 0.0 ? dx / len : 0.0;
    const double uy = len > 0.0 ? dy / len : 1.0;
    auto place = [&](double along, double lateral, double radius) {
        // lateral > 0 is to the right of travel, i.e. along (uy, -ux).
        return Obstacle{{track.start.x + along * len * ux + lateral * uy,
                         track.start.y + along * len * uy - lateral * ux},
                        radius};
    };
    switch (id) {
        case EnvironmentId::E1: env.objects = {place(0.3, 1.8, 0.4), place(0.75, -1.8, 0.4)}; break;
        case EnvironmentId::E2:
            env.objects = {place(0.15, 0.9, 0.25), place(0.35, -0.8, 0.2), place(0.55, 0.75, 0.2),
                           place(0.75, -0.9, 0.3), place(0.9, 0.8, 0.2)};
            break;
        case EnvironmentId::E3: {
            const double half = 0.6;
            env.walls = Corridor{std::min(track.start.x, track.end.x) - half,
                                 std::max(track.start.x, track.end.x) + half};
            break;
        }
    }
    return env;
}

}  // namespace locfuse
