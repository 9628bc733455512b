#pragma once

// JSON scenario files. A file overlays the built-in defaults: any key may be
// omitted, unknown keys are errors, and `seed` is mandatory. to_json writes
// every field, so its output reproduces the run exactly.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "locfuse/errors.hpp"
#include "locfuse/world/scenario.hpp"

namespace locfuse::io {

using nlohmann::ordered_json;
using json = nlohmann::json;

inline constexpr const char* kDefaultsPreset = "paper-defaults";

/// Built-in preset: straight track, E1, high speed, fixed maximum rates, seed 1.
inline Scenario default_scenario() {
    Scenario s;
    s.name = kDefaultsPreset;
    return s;
}

namespace detail {

inline void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& [key, _] : j.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

inline std::string join(const std::string& where, const char* key) {
    return where.empty() ? std::string(key) : where + "." + key;
}

inline void read_number(const json& j, const char* key, double& out, const std::string& where) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if (!v.is_number()) throw ConfigError(join(where, key) + ": expected a number");
    out = v.get<double>();
    if (!std::isfinite(out)) throw ConfigError(join(where, key) + ": must be finite");
}

inline void read_bool(const json& j, const char* key, bool& out, const std::string& where) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_boolean()) throw ConfigError(join(where, key) + ": expected true or false");
    out = j.at(key).get<bool>();
}

inline void read_string(const json& j, const char* key, std::string& out, const std::string& where) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_string()) throw ConfigError(join(where, key) + ": expected a string");
    out = j.at(key).get<std::string>();
}

inline Point2 read_point(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw ConfigError(where + ": expected [x, y]");
    return {v[0].get<double>(), v[1].get<double>()};
}

inline void read_point(const json& j, const char* key, Point2& out, const std::string& where) {
    if (j.contains(key)) out = read_point(j.at(key), join(where, key));
}

inline void read_channels(const json& j, const char* key, ChannelVariance& c, const std::string& where) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    const std::string w = join(where, key);
    check_keys(v, {"x", "y", "vx", "vy"}, w);
    read_number(v, "x", c.x, w);
    read_number(v, "y", c.y, w);
    read_number(v, "vx", c.vx, w);
    read_number(v, "vy", c.vy, w);
}

inline void read_bias(const json& j, const char* key, BiasNoise& b, const std::string& where) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    const std::string w = join(where, key);
    check_keys(v, {"variance", "time_constant"}, w);
    read_channels(v, "variance", b.variance, w);
    read_number(v, "time_constant", b.time_constant, w);
}

inline void read_position_sensor(const json& v, PositionSensorNoise& n, const std::string& w) {
    read_channels(v, "white", n.white, w);
    read_bias(v, "bias", n.bias, w);
}

inline void read_limits(const json& j, const char* key, SensorRateLimits& l, const std::string& where) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    const std::string w = join(where, key);
    check_keys(v, {"f_min", "f_max", "gamma", "decay_slope", "decay_offset"}, w);
    read_number(v, "f_min", l.f_min, w);
    read_number(v, "f_max", l.f_max, w);
    read_number(v, "gamma", l.gamma, w);
    read_number(v, "decay_slope", l.slope, w);
    read_number(v, "decay_offset", l.offset, w);
}

inline void read_range(const json& j, const char* key, FrequencyRange& r, const std::string& where) {
    if (!j.contains(key)) return;
    const Point2 p = read_point(j.at(key), join(where, key));
    r = {p.x, p.y};
}

inline void read_affine(const json& j, const char* key, AffinePower& a, const std::string& where) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    const std::string w = join(where, key);
    check_keys(v, {"intercept_w", "slope_w"}, w);
    read_number(v, "intercept_w", a.intercept, w);
    read_number(v, "slope_w", a.slope, w);
}

inline void read_track(const json& v, Scenario& s) {
    check_keys(v, {"kind", "start", "end", "length", "turn_radius"}, "track");
    std::string kind = s.track.kind == TrackKind::Race ? "race" : "straight";
    read_string(v, "kind", kind, "track");
    if (kind == "straight") {
        if (v.contains("length") || v.contains("turn_radius"))
            throw ConfigError("track: length and turn_radius apply to the race track only");
        if (s.track.kind != TrackKind::Straight) s.track = TrackProfile::straight();
        read_point(v, "start", s.track.start, "track");
        read_point(v, "end", s.track.end, "track");
    } else if (kind == "race") {
        if (v.contains("end")) throw ConfigError("track: end applies to the straight track only");
        if (s.track.kind != TrackKind::Race) s.track = TrackProfile::race();
        read_point(v, "start", s.track.start, "track");
        read_number(v, "length", s.track.length, "track");
        read_number(v, "turn_radius", s.track.turn_radius, "track");
    } else {
        throw ConfigError("track.kind: expected 'straight' or 'race', got '" + kind + "'");
    }
}

inline void read_speed(const json& v, Scenario& s) {
    check_keys(v, {"profile", "cruise_speed", "accel_limit"}, "speed");
    if (v.contains("profile")) {
        std::string p;
        read_string(v, "profile", p, "speed");
        if (v.contains("cruise_speed")) throw ConfigError("speed: give either profile or cruise_speed, not both");
        if (p == "low") s.speed = SpeedProfile::low();
        else if (p == "high") s.speed = SpeedProfile::high();
        else throw ConfigError("speed.profile: expected 'low' or 'high', got '" + p + "'");
    }
    read_number(v, "cruise_speed", s.speed.cruise_speed, "speed");
    read_number(v, "accel_limit", s.speed.accel_limit, "speed");
}

inline void read_environment(const json* v, Scenario& s) {
    // The built-in layout depends on the track, so it is rebuilt after the
    // track is known unless the file lists objects explicitly.
    EnvironmentId id = s.environment.id;
    if (v) {
        check_keys(*v, {"id", "objects", "walls", "radar_range"}, "environment");
        if (v->contains("id")) {
            std::string name;
            read_string(*v, "id", name, "environment");
            id = environment_from_string(name);
        }
    }
    const double range = s.environment.radar_range;
    s.environment = default_environment(id, s.track);
    s.environment.radar_range = range;
    if (!v) return;
    if (v->contains("objects")) {
        const json& list = v->at("objects");
        if (!list.is_array()) throw ConfigError("environment.objects: expected a list");
        s.environment.objects.clear();
        for (std::size_t i = 0; i < list.size(); ++i) {
            const std::string w = "environment.objects[" + std::to_string(i) + "]";
            check_keys(list[i], {"center", "radius"}, w);
            if (!list[i].contains("center") || !list[i].contains("radius"))
                throw ConfigError(w + ": needs center and radius");
            Obstacle o;
            read_point(list[i], "center", o.center, w);
            read_number(list[i], "radius", o.radius, w);
            s.environment.objects.push_back(o);
        }
    }
    if (v->contains("walls")) {
        const json& w = v->at("walls");
        if (w.is_null()) {
            s.environment.walls.reset();
        } else {
            check_keys(w, {"x_min", "x_max"}, "environment.walls");
            Corridor c = s.environment.walls.value_or(Corridor{});
            read_number(w, "x_min", c.x_min, "environment.walls");
            read_number(w, "x_max", c.x_max, "environment.walls");
            s.environment.walls = c;
        }
    }
    read_number(*v, "radar_range", s.environment.radar_range, "environment");
    if (s.environment.id == EnvironmentId::E3 && !s.environment.objects.empty())
        throw ConfigError("environment: E3 has no objects");
}

inline void read_noise(const json& v, Scenario& s) {
    check_keys(v, {"imu", "uwb", "radar", "shared_bias", "filter"}, "noise");
    if (v.contains("imu")) {
        const json& imu = v.at("imu");
        check_keys(imu, {"ax", "ay", "sin_theta", "cos_theta"}, "noise.imu");
        read_number(imu, "ax", s.noise.imu.ax, "noise.imu");
        read_number(imu, "ay", s.noise.imu.ay, "noise.imu");
        read_number(imu, "sin_theta", s.noise.imu.sin_theta, "noise.imu");
        read_number(imu, "cos_theta", s.noise.imu.cos_theta, "noise.imu");
    }
    if (v.contains("uwb")) {
        check_keys(v.at("uwb"), {"white", "bias"}, "noise.uwb");
        read_position_sensor(v.at("uwb"), s.noise.uwb, "noise.uwb");
    }
    if (v.contains("radar")) {
        const json& r = v.at("radar");
        check_keys(r, {"white", "bias", "distance", "speed_factor"}, "noise.radar");
        read_position_sensor(r, s.noise.radar, "noise.radar");
        read_number(r, "distance", s.noise.radar.distance, "noise.radar");
        read_number(r, "speed_factor", s.noise.radar.speed_factor, "noise.radar");
    }
    read_bias(v, "shared_bias", s.noise.shared_bias, "noise");
    if (v.contains("filter")) {
        const json& f = v.at("filter");
        check_keys(f, {"process", "uwb", "radar"}, "noise.filter");
        if (f.contains("process")) {
            const json& q = f.at("process");
            if (!q.is_array() || q.size() != 4) throw ConfigError("noise.filter.process: expected 4 numbers");
            for (int i = 0; i < 4; ++i) {
                if (!q[i].is_number()) throw ConfigError("noise.filter.process: expected 4 numbers");
                s.filter.process_noise[i] = q[i].get<double>();
            }
        }
        read_channels(f, "uwb", s.filter.noise.uwb, "noise.filter");
        read_channels(f, "radar", s.filter.noise.radar, "noise.filter");
    }
}

inline void read_asa(const json& v, Scenario& s) {
    check_keys(v, {"enabled", "theta_threshold", "theta_threshold_deg", "proximity_threshold", "period", "uwb", "radar"},
               "asa");
    read_bool(v, "enabled", s.asa_enabled, "asa");
    if (v.contains("theta_threshold") && v.contains("theta_threshold_deg"))
        throw ConfigError("asa: give theta_threshold (rad) or theta_threshold_deg, not both");
    read_number(v, "theta_threshold", s.asa.theta_threshold, "asa");
    if (v.contains("theta_threshold_deg")) {
        double deg = 0.0;
        read_number(v, "theta_threshold_deg", deg, "asa");
        s.asa.theta_threshold = deg * std::numbers::pi / 180.0;
    }
    read_number(v, "proximity_threshold", s.asa.proximity_threshold, "asa");
    read_number(v, "period", s.asa.period, "asa");
    read_limits(v, "uwb", s.asa.uwb, "asa");
    read_limits(v, "radar", s.asa.radar, "asa");
}

inline void read_power(const json& v, Scenario& s) {
    check_keys(v, {"imu_w", "base_w", "uwb", "radar", "uwb_range", "radar_range"}, "power_model");
    read_number(v, "imu_w", s.power.imu, "power_model");
    read_number(v, "base_w", s.power.base, "power_model");
    read_affine(v, "uwb", s.power.uwb, "power_model");
    read_affine(v, "radar", s.power.radar, "power_model");
    read_range(v, "uwb_range", s.power.uwb_range, "power_model");
    read_range(v, "radar_range", s.power.radar_range, "power_model");
}

inline ordered_json channels_json(const ChannelVariance& c) {
    return {{"x", c.x}, {"y", c.y}, {"vx", c.vx}, {"vy", c.vy}};
}

inline ordered_json bias_json(const BiasNoise& b) {
    return {{"variance", channels_json(b.variance)}, {"time_constant", b.time_constant}};
}

inline ordered_json limits_json(const SensorRateLimits& l) {
    return {{"f_min", l.f_min}, {"f_max", l.f_max}, {"gamma", l.gamma}, {"decay_slope", l.slope},
            {"decay_offset", l.offset}};
}

inline ordered_json point_json(Point2 p) { return ordered_json::array({p.x, p.y}); }

}  // namespace detail

/// Parses a scenario document. Throws ConfigError on any schema problem;
/// semantic checks are left to validate(Scenario).
inline Scenario scenario_from_json(const json& j) {
    using namespace detail;
    check_keys(j, {"name", "preset", "track", "speed", "environment", "noise", "weights", "asa", "rates",
                   "power_model", "variant", "seed", "duration"},
               "scenario");
    if (j.contains("preset")) {
        std::string p;
        read_string(j, "preset", p, "");
        if (p != kDefaultsPreset) throw ConfigError("unknown preset '" + p + "' (expected paper-defaults)");
    }
    if (!j.contains("seed")) throw ConfigError("seed is required");
    const json& seed = j.at("seed");
    if (!seed.is_number_unsigned()) throw ConfigError("seed: expected a non-negative integer");

    Scenario s = default_scenario();
    s.name = "scenario";
    read_string(j, "name", s.name, "");
    s.seed = seed.get<std::uint64_t>();
    if (j.contains("track")) read_track(j.at("track"), s);
    if (j.contains("speed")) read_speed(j.at("speed"), s);
    read_environment(j.contains("environment") ? &j.at("environment") : nullptr, s);
    if (j.contains("noise")) read_noise(j.at("noise"), s);
    if (j.contains("weights")) {
        const json& w = j.at("weights");
        check_keys(w, {"alpha_x", "alpha_y", "beta_x", "beta_y"}, "weights");
        read_number(w, "alpha_x", s.filter.weights.alpha_x, "weights");
        read_number(w, "alpha_y", s.filter.weights.alpha_y, "weights");
        read_number(w, "beta_x", s.filter.weights.beta_x, "weights");
        read_number(w, "beta_y", s.filter.weights.beta_y, "weights");
    }
    if (j.contains("asa")) read_asa(j.at("asa"), s);
    if (j.contains("rates")) {
        const json& r = j.at("rates");
        check_keys(r, {"uwb", "radar"}, "rates");
        read_number(r, "uwb", s.rates.uwb, "rates");
        read_number(r, "radar", s.rates.radar, "rates");
    }
    if (j.contains("power_model")) read_power(j.at("power_model"), s);
    if (j.contains("variant")) {
        std::string v;
        read_string(j, "variant", v, "");
        s.variant = variant_from_string(v);
    }
    if (j.contains("duration")) {
        const json& d = j.at("duration");
        if (d.is_string() && d.get<std::string>() == "auto") s.duration.reset();
        else if (d.is_number()) s.duration = d.get<double>();
        else throw ConfigError("duration: expected seconds or \"auto\"");
    }
    return s;
}

/// Fully resolved document; scenario_from_json(to_json(s)) reproduces `s`.
inline ordered_json to_json(const Scenario& s) {
    using namespace detail;
    ordered_json track;
    if (s.track.kind == TrackKind::Straight) {
        track = {{"kind", "straight"}, {"start", point_json(s.track.start)}, {"end", point_json(s.track.end)}};
    } else {
        track = {{"kind", "race"},
                 {"start", point_json(s.track.start)},
                 {"length", s.track.length},
                 {"turn_radius", s.track.turn_radius}};
    }

    ordered_json objects = ordered_json::array();
    for (const auto& o : s.environment.objects) objects.push_back({{"center", point_json(o.center)}, {"radius", o.radius}});
    ordered_json env = {{"id", to_string(s.environment.id)}, {"objects", objects}};
    if (s.environment.walls) env["walls"] = {{"x_min", s.environment.walls->x_min}, {"x_max", s.environment.walls->x_max}};
    else env["walls"] = nullptr;
    env["radar_range"] = s.environment.radar_range;

    const auto& q = s.filter.process_noise;
    ordered_json noise = {
        {"imu",
         {{"ax", s.noise.imu.ax},
          {"ay", s.noise.imu.ay},
          {"sin_theta", s.noise.imu.sin_theta},
          {"cos_theta", s.noise.imu.cos_theta}}},
        {"uwb", {{"white", channels_json(s.noise.uwb.white)}, {"bias", bias_json(s.noise.uwb.bias)}}},
        {"radar",
         {{"white", channels_json(s.noise.radar.white)},
          {"bias", bias_json(s.noise.radar.bias)},
          {"distance", s.noise.radar.distance},
          {"speed_factor", s.noise.radar.speed_factor}}},
        {"shared_bias", bias_json(s.noise.shared_bias)},
        {"filter",
         {{"process", ordered_json::array({q[0], q[1], q[2], q[3]})},
          {"uwb", channels_json(s.filter.noise.uwb)},
          {"radar", channels_json(s.filter.noise.radar)}}},
    };

    ordered_json out;
    out["name"] = s.name;
    out["seed"] = s.seed;
    out["variant"] = to_string(s.variant);
    if (s.duration) out["duration"] = *s.duration;
    else out["duration"] = "auto";
    out["track"] = track;
    out["speed"] = {{"cruise_speed", s.speed.cruise_speed}, {"accel_limit", s.speed.accel_limit}};
    out["environment"] = env;
    out["noise"] = noise;
    out["weights"] = {{"alpha_x", s.filter.weights.alpha_x},
                      {"alpha_y", s.filter.weights.alpha_y},
                      {"beta_x", s.filter.weights.beta_x},
                      {"beta_y", s.filter.weights.beta_y}};
    out["asa"] = {{"enabled", s.asa_enabled},
                  {"theta_threshold", s.asa.theta_threshold},
                  {"proximity_threshold", s.asa.proximity_threshold},
                  {"period", s.asa.period},
                  {"uwb", limits_json(s.asa.uwb)},
                  {"radar", limits_json(s.asa.radar)}};
    out["rates"] = {{"uwb", s.rates.uwb}, {"radar", s.rates.radar}};
    out["power_model"] = {{"imu_w", s.power.imu},
                          {"base_w", s.power.base},
                          {"uwb", {{"intercept_w", s.power.uwb.intercept}, {"slope_w", s.power.uwb.slope}}},
                          {"radar", {{"intercept_w", s.power.radar.intercept}, {"slope_w", s.power.radar.slope}}},
                          {"uwb_range", ordered_json::array({s.power.uwb_range.min, s.power.uwb_range.max})},
                          {"radar_range", ordered_json::array({s.power.radar_range.min, s.power.radar_range.max})}};
    return out;
}

inline Scenario parse_scenario(const std::string& text, const std::string& origin = "scenario") {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    return scenario_from_json(j);
}

inline Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read scenario file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), path.string());
}

}  // namespace locfuse::io
