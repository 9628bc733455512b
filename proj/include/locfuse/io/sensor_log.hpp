#pragma once

// Sensor log CSV: one row per sample, time-sorted, with the payload
// columns of its sensor filled and the others empty. Truth columns are
// optional but must be all-or-nothing per row.
//
//   imu:   ax, ay, theta
//   uwb:   x, y, vx, vy
//   radar: x, y, vx, vy, [distance]

#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "locfuse/io/csv.hpp"
#include "locfuse/world/scenario.hpp"

namespace locfuse::io {

inline const std::vector<std::string>& sensor_log_columns() {
    static const std::vector<std::string> cols = {"t",  "sensor", "ax", "ay",       "theta",   "x",       "y",
                                                  "vx", "vy",     "distance", "truth_x", "truth_y", "truth_vx",
                                                  "truth_vy"};
    return cols;
}

inline std::string sensor_log_to_csv(const SensorLog& log) {
    std::string out = join_header(sensor_log_columns());
    out += '\n';
    auto put = [&](double v) {
        out += ',';
        append_double(out, v);
    };
    for (const auto& r : log) {
        append_double(out, r.t());
        switch (r.kind) {
            case SensorKind::Imu:
                out += ",imu";
                put(r.imu.ax);
                put(r.imu.ay);
                put(r.imu.theta);
                out += ",,,,,";
                break;
            case SensorKind::Uwb:
                out += ",uwb,,,";
                put(r.uwb.x);
                put(r.uwb.y);
                put(r.uwb.vx);
                put(r.uwb.vy);
                out += ',';
                break;
            case SensorKind::Radar:
                out += ",radar,,,";
                put(r.radar.x);
                put(r.radar.y);
                put(r.radar.vx);
                put(r.radar.vy);
                if (r.radar.distance) put(*r.radar.distance);
                else out += ',';
                break;
        }
        if (r.truth) {
            put(r.truth->x);
            put(r.truth->y);
            put(r.truth->vx);
            put(r.truth->vy);
        } else {
            out += ",,,,";
        }
        out += '\n';
    }
    return out;
}

inline void write_sensor_log(const SensorLog& log, const std::string& path) {
    write_text(path, sensor_log_to_csv(log));
}

/// Strict parse; every problem is reported as a ConfigError with its line number.
inline SensorLog parse_sensor_log(const std::string& text, const std::string& origin = "sensor log") {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError(origin + ": empty log");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != join_header(sensor_log_columns()))
        throw ConfigError(origin + ":1: header must be " + join_header(sensor_log_columns()));

    const auto& cols = sensor_log_columns();
    SensorLog log;
    std::size_t line_no = 1;
    double last_t = -std::numeric_limits<double>::infinity();
    while (std::getline(in, line)) {
        ++line_no;
        const std::string where = origin + ":" + std::to_string(line_no);
        if (line.empty() || line == "\r") continue;
        const auto f = split_row(line);
        if (f.size() != cols.size())
            throw ConfigError(where + ": expected " + std::to_string(cols.size()) + " columns, got " +
                              std::to_string(f.size()));
        auto num = [&](std::size_t i) {
            double v = 0.0;
            if (!parse_double(f[i], v) || !std::isfinite(v))
                throw ConfigError(where + ": bad or missing value in column " + cols[i]);
            return v;
        };
        auto require_empty = [&](std::size_t from, std::size_t to) {
            for (std::size_t i = from; i < to; ++i)
                if (!f[i].empty()) throw ConfigError(where + ": column " + cols[i] + " does not apply to " +
                                                     std::string(f[1]) + " rows");
        };

        SensorLogRow r;
        const double t = num(0);
        if (t < last_t) throw ConfigError(where + ": rows must be time-sorted");
        last_t = t;
        if (f[1] == "imu") {
            r.kind = SensorKind::Imu;
            r.imu = {t, num(2), num(3), num(4)};
            require_empty(5, 10);
        } else if (f[1] == "uwb") {
            r.kind = SensorKind::Uwb;
            require_empty(2, 5);
            r.uwb = {t, num(5), num(6), num(7), num(8)};
            require_empty(9, 10);
        } else if (f[1] == "radar") {
            r.kind = SensorKind::Radar;
            require_empty(2, 5);
            r.radar.t = t;
            r.radar.x = num(5);
            r.radar.y = num(6);
            r.radar.vx = num(7);
            r.radar.vy = num(8);
            if (!f[9].empty()) r.radar.distance = num(9);
        } else {
            throw ConfigError(where + ": unknown sensor '" + std::string(f[1]) + "'");
        }

        std::size_t truth_fields = 0;
        for (std::size_t i = 10; i < 14; ++i) truth_fields += f[i].empty() ? 0 : 1;
        if (truth_fields == 4) r.truth = Pose{num(10), num(11), num(12), num(13)};
        else if (truth_fields != 0) throw ConfigError(where + ": truth columns must be all present or all empty");
        log.push_back(r);
    }
    if (log.empty()) throw ConfigError(origin + ": log has no rows");
    return log;
}

inline SensorLog load_sensor_log(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read sensor log " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_sensor_log(buf.str(), path);
}

}  // namespace locfuse::io
