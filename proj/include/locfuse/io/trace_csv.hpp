#pragma once

// Trace CSV: one row per tick with truth, estimate, covariance diagonal and
// sampling state. Wall-clock step time is deliberately not part of it so that
// equal seeds give byte-identical files; it goes to a separate latency CSV.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "locfuse/io/csv.hpp"
#include "locfuse/trace.hpp"

namespace locfuse::io {

inline const std::vector<std::string>& trace_columns() {
    static const std::vector<std::string> cols = {
        "schema_version", "t",        "truth_x",  "truth_y",  "truth_vx", "truth_vy",        "est_x",
        "est_y",          "est_vx",   "est_vy",   "p_xx",     "p_yy",     "p_vxvx",          "p_vyvy",
        "f_uwb",          "f_radar",  "sensing_power_w",      "uwb_used", "radar_used"};
    return cols;
}

/// Truth columns are left empty when the trace carries no truth.
inline std::string trace_to_csv(const SimulationTrace& trace) {
    std::string out = join_header(trace_columns());
    out += '\n';
    const std::string version = std::to_string(kTraceSchemaVersion);
    for (const auto& r : trace.rows) {
        out += version;
        auto put = [&](double v) {
            out += ',';
            append_double(out, v);
        };
        put(r.t);
        if (trace.has_truth) {
            put(r.truth.x);
            put(r.truth.y);
            put(r.truth.vx);
            put(r.truth.vy);
        } else {
            out += ",,,,";
        }
        put(r.estimate.x);
        put(r.estimate.y);
        put(r.estimate.vx);
        put(r.estimate.vy);
        for (double p : r.cov_diag) put(p);
        put(r.f_uwb);
        put(r.f_radar);
        put(r.sensing_power);
        out += r.uwb_used ? ",1" : ",0";
        out += r.radar_used ? ",1\n" : ",0\n";
    }
    return out;
}

inline void write_trace_csv(const SimulationTrace& trace, const std::string& path) {
    write_text(path, trace_to_csv(trace));
}

/// Parses a trace CSV. Step times are not stored, so they come back as 0.
inline SimulationTrace parse_trace_csv(const std::string& text, const std::string& origin = "trace") {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError(origin + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != join_header(trace_columns())) throw ConfigError(origin + ": unexpected header");

    SimulationTrace trace;
    bool any_truth = false;
    bool missing_truth = false;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto f = split_row(line);
        const std::string where = origin + ":" + std::to_string(line_no);
        if (f.size() != trace_columns().size()) throw ConfigError(where + ": expected 19 columns");
        std::uint64_t version = 0;
        if (!parse_u64(f[0], version) || version != static_cast<std::uint64_t>(kTraceSchemaVersion))
            throw ConfigError(where + ": unsupported schema_version");
        auto num = [&](std::size_t i) {
            double v = 0.0;
            if (!parse_double(f[i], v)) throw ConfigError(where + ": bad number in column " + trace_columns()[i]);
            return v;
        };
        TraceRow r;
        r.t = num(1);
        if (f[2].empty() && f[3].empty() && f[4].empty() && f[5].empty()) {
            missing_truth = true;
        } else {
            any_truth = true;
            r.truth = {num(2), num(3), num(4), num(5)};
        }
        r.estimate = {num(6), num(7), num(8), num(9)};
        r.cov_diag = {num(10), num(11), num(12), num(13)};
        r.f_uwb = num(14);
        r.f_radar = num(15);
        r.sensing_power = num(16);
        auto flag = [&](std::size_t i) {
            if (f[i] == "1") return true;
            if (f[i] == "0") return false;
            throw ConfigError(where + ": " + trace_columns()[i] + " must be 0 or 1");
        };
        r.uwb_used = flag(17);
        r.radar_used = flag(18);
        trace.rows.push_back(r);
    }
    if (any_truth && missing_truth) throw ConfigError(origin + ": truth columns present on some rows only");
    trace.has_truth = any_truth;
    return trace;
}

inline std::string latency_to_csv(const SimulationTrace& trace) {
    std::string out = "tick,t,step_time_s\n";
    for (std::size_t k = 0; k < trace.rows.size(); ++k) {
        out += std::to_string(k);
        out += ',';
        append_double(out, trace.rows[k].t);
        out += ',';
        append_double(out, trace.rows[k].step_time);
        out += '\n';
    }
    return out;
}

}  // namespace locfuse::io
