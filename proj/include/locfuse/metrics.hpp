#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "locfuse/errors.hpp"
#include "locfuse/trace.hpp"

namespace locfuse {

/// Root-mean-square 2D position error over all ticks, in cm.
inline double rmse_cm(const SimulationTrace& trace) {
    if (trace.empty()) throw ContractError("rmse needs a non-empty trace");
    if (!trace.has_truth) throw ContractError("rmse needs truth columns");
    double sum = 0.0;
    for (const auto& r : trace.rows) {
        const double ex = r.estimate.x - r.truth.x;
        const double ey = r.estimate.y - r.truth.y;
        sum += ex * ex + ey * ey;
    }
    return 100.0 * std::sqrt(sum / static_cast<double>(trace.size()));
}

struct LatencyProfile {
    double mean_ms = 0.0;
    double min_ms = 0.0;
    double p50_ms = 0.0;
    double p99_ms = 0.0;
    double max_ms = 0.0;
    std::size_t samples = 0;
};

/// Nearest-rank percentile of an ascending-sorted sample, q in [0, 1].
inline double percentile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) return 0.0;
    const auto n = static_cast<double>(sorted.size());
    auto rank = static_cast<std::size_t>(std::ceil(q * n));
    rank = std::clamp<std::size_t>(rank, 1, sorted.size());
    return sorted[rank - 1];
}

/// Distribution of per-tick filter compute time. Row 0 only seeds the
/// filter and has no step, so it is left out.
inline LatencyProfile latency_profile(const SimulationTrace& trace) {
    LatencyProfile p;
    if (trace.size() < 2) return p;
    std::vector<double> ms;
    ms.reserve(trace.size() - 1);
    double sum = 0.0;
    for (std::size_t k = 1; k < trace.size(); ++k) {
        ms.push_back(trace.rows[k].step_time * 1e3);
        sum += ms.back();
    }
    std::sort(ms.begin(), ms.end());
    p.samples = ms.size();
    p.mean_ms = sum / static_cast<double>(ms.size());
    p.min_ms = ms.front();
    p.p50_ms = percentile_sorted(ms, 0.50);
    p.p99_ms = percentile_sorted(ms, 0.99);
    p.max_ms = ms.back();
    return p;
}

/// Per-tick normalised estimation error squared using the covariance diagonal.
inline std::vector<double> nees(const SimulationTrace& trace) {
    if (!trace.has_truth) throw ContractError("nees needs truth columns");
    std::vector<double> out;
    out.reserve(trace.size());
    for (const auto& r : trace.rows) {
        const double err[4] = {r.estimate.x - r.truth.x, r.estimate.y - r.truth.y, r.estimate.vx - r.truth.vx,
                               r.estimate.vy - r.truth.vy};
        double v = 0.0;
        for (int i = 0; i < 4; ++i) {
            if (err[i] == 0.0) continue;
            v += err[i] * err[i] / r.cov_diag[i];
        }
        out.push_back(v);
    }
    return out;
}

struct ChiSquareBand {
    double lower = 0.0;
    double upper = 0.0;
};

/// Two-sided band for the mean of `samples` independent chi-square(dof) draws.
inline ChiSquareBand chi_square_band(double dof, std::size_t samples, double confidence = 0.95) {
    const double n = static_cast<double>(samples);
    const boost::math::chi_squared dist(dof * n);
    const double tail = 0.5 * (1.0 - confidence);
    return {boost::math::quantile(dist, tail) / n, boost::math::quantile(dist, 1.0 - tail) / n};
}

struct NeesConsistency {
    std::vector<double> averaged;  ///< one value per window
    ChiSquareBand band;
    double fraction_inside = 0.0;
};

/// Averages NEES across runs (and over consecutive windows of `window`
/// ticks), then reports the fraction of windows inside the chi-square(4) band.
inline NeesConsistency nees_consistency(const std::vector<std::vector<double>>& runs, std::size_t window = 1,
                                        double confidence = 0.95, std::size_t skip = 0) {
    if (runs.empty() || window == 0) throw ContractError("nees consistency needs runs and a positive window");
    std::size_t len = runs.front().size();
    for (const auto& r : runs) len = std::min(len, r.size());
    NeesConsistency c;
    c.band = chi_square_band(4.0, runs.size() * window, confidence);
    std::size_t inside = 0;
    for (std::size_t start = skip; start + window <= len; start += window) {
        double sum = 0.0;
        for (const auto& r : runs)
            for (std::size_t k = start; k < start + window; ++k) sum += r[k];
        const double avg = sum / static_cast<double>(runs.size() * window);
        c.averaged.push_back(avg);
        if (avg >= c.band.lower && avg <= c.band.upper) ++inside;
    }
    if (!c.averaged.empty()) c.fraction_inside = static_cast<double>(inside) / static_cast<double>(c.averaged.size());
    return c;
}

struct SampleStats {
    double mean = 0.0;
    double stddev = 0.0;  ///< sample standard deviation (n - 1)
    double std_error = 0.0;
};

inline SampleStats sample_stats(const std::vector<double>& v) {
    SampleStats s;
    if (v.empty()) return s;
    double sum = 0.0;
    for (double x : v) sum += x;
    s.mean = sum / static_cast<double>(v.size());
    if (v.size() > 1) {
        double ss = 0.0;
        for (double x : v) ss += (x - s.mean) * (x - s.mean);
        s.stddev = std::sqrt(ss / static_cast<double>(v.size() - 1));
        s.std_error = s.stddev / std::sqrt(static_cast<double>(v.size()));
    }
    return s;
}

}  // namespace locfuse
