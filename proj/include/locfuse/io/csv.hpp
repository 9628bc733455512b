#pragma once

// Minimal CSV helpers: shortest round-trip number formatting, strict parsing.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "locfuse/errors.hpp"

namespace locfuse::io {

/// Shortest decimal text that parses back to exactly `v` ("." separator, no locale).
inline std::string format_double(double v) {
    if (v == 0.0) return std::signbit(v) ? "-0" : "0";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

inline void append_double(std::string& out, double v) { out += format_double(v); }

inline bool parse_double(std::string_view s, double& out) {
    if (s.empty()) return false;
    if (s.front() == '+') s.remove_prefix(1);
    const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
    return r.ec == std::errc() && r.ptr == s.data() + s.size();
}

inline bool parse_u64(std::string_view s, std::uint64_t& out) {
    if (s.empty()) return false;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
    return r.ec == std::errc() && r.ptr == s.data() + s.size();
}

/// Splits on commas; fields never contain quotes or commas in our formats.
inline std::vector<std::string_view> split_row(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

inline std::string join_header(const std::vector<std::string>& cols) {
    std::string h;
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (i) h += ',';
        h += cols[i];
    }
    return h;
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path);
    out << text;
    if (!out) throw ConfigError("failed writing " + path);
}

}  // namespace locfuse::io
