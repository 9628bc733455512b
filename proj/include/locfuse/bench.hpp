#pragma once

// Paired-seed experiments: fusion-variant comparison and fixed-rate sweeps.

#include <algorithm>
#include <cstdint>
#include <future>
#include <string>
#include <thread>
#include <vector>

#include "locfuse/adaptive_sensing.hpp"
#include "locfuse/metrics.hpp"
#include "locfuse/world/scenario.hpp"

namespace locfuse {

/// `count` consecutive seeds starting at `base`.
inline std::vector<std::uint64_t> seed_range(std::uint64_t base, std::size_t count) {
    std::vector<std::uint64_t> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = base + i;
    return out;
}

namespace detail {

/// Evaluates fn(i) for i in [0, n) on up to hardware_concurrency threads.
template <typename Fn>
auto parallel_map(std::size_t n, Fn fn) -> std::vector<decltype(fn(std::size_t{}))> {
    using R = decltype(fn(std::size_t{}));
    std::vector<R> out(n);
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(n, std::thread::hardware_concurrency()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
        return out;
    }
    std::vector<std::future<void>> jobs;
    for (std::size_t w = 0; w < workers; ++w)
        jobs.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t i = w; i < n; i += workers) out[i] = fn(i);
        }));
    for (auto& j : jobs) j.get();
    return out;
}

}  // namespace detail

struct VariantResult {
    Variant variant = Variant::Fused;
    std::vector<double> rmse_cm;  ///< one per seed, same order as the seed list
    SampleStats stats;
};

struct ComparisonTable {
    std::vector<std::uint64_t> seeds;
    std::vector<VariantResult> rows;

    const VariantResult& at(Variant v) const {
        for (const auto& r : rows)
            if (r.variant == v) return r;
        throw ContractError("variant not in comparison table");
    }
};

/// Runs every variant on every seed. For a given seed the truth and all
/// sensor noise streams are identical across variants, so differences are paired.
inline ComparisonTable compare_variants(const Scenario& base, const std::vector<Variant>& variants,
                                        const std::vector<std::uint64_t>& seeds) {
    if (variants.size() < 2) throw ConfigError("comparison needs at least two variants");
    if (seeds.size() < 3) throw ConfigError("comparison needs at least three seeds");
    validate(base);

    const std::size_t n = variants.size() * seeds.size();
    const auto results = detail::parallel_map(n, [&](std::size_t i) {
        Scenario s = base;
        s.variant = variants[i / seeds.size()];
        s.seed = seeds[i % seeds.size()];
        return rmse_cm(run_scenario(s));
    });

    ComparisonTable table;
    table.seeds = seeds;
    for (std::size_t v = 0; v < variants.size(); ++v) {
        VariantResult r;
        r.variant = variants[v];
        r.rmse_cm.assign(results.begin() + static_cast<std::ptrdiff_t>(v * seeds.size()),
                         results.begin() + static_cast<std::ptrdiff_t>((v + 1) * seeds.size()));
        r.stats = sample_stats(r.rmse_cm);
        table.rows.push_back(std::move(r));
    }
    return table;
}

struct SweepCell {
    double f_uwb = 0.0;
    double f_radar = 0.0;
    std::vector<double> rmse_cm;  ///< per seed
    SampleStats stats;
    double sensing_power = 0.0;   ///< W
};

struct SweepSurface {
    std::vector<double> uwb_grid;
    std::vector<double> radar_grid;
    std::vector<std::uint64_t> seeds;
    std::vector<SweepCell> cells;  ///< row-major: uwb outer, radar inner

    const SweepCell& at(double f_uwb, double f_radar) const {
        for (const auto& c : cells)
            if (c.f_uwb == f_uwb && c.f_radar == f_radar) return c;
        throw ContractError("frequency pair not in sweep");
    }
};

/// Fixed-rate grid over (f_uwb, f_radar) with adaptation disabled. Every
/// cell uses the same seed list, so cells are paired.
inline SweepSurface frequency_sweep(const Scenario& base, const std::vector<double>& uwb_grid,
                                    const std::vector<double>& radar_grid, const std::vector<std::uint64_t>& seeds) {
    if (uwb_grid.empty() || radar_grid.empty()) throw ConfigError("sweep grids must be non-empty");
    if (seeds.empty()) throw ConfigError("sweep needs at least one seed");
    for (double f : uwb_grid)
        if (!(f >= base.power.uwb_range.min && f <= base.power.uwb_range.max))
            throw ConfigError("UWB grid value " + std::to_string(f) + " Hz outside [" +
                              std::to_string(base.power.uwb_range.min) + ", " +
                              std::to_string(base.power.uwb_range.max) + "]");
    for (double f : radar_grid)
        if (!(f >= base.power.radar_range.min && f <= base.power.radar_range.max))
            throw ConfigError("radar grid value " + std::to_string(f) + " Hz outside [" +
                              std::to_string(base.power.radar_range.min) + ", " +
                              std::to_string(base.power.radar_range.max) + "]");
    validate(base);

    SweepSurface out;
    out.uwb_grid = uwb_grid;
    out.radar_grid = radar_grid;
    out.seeds = seeds;
    const std::size_t per_cell = seeds.size();
    const std::size_t n_cells = uwb_grid.size() * radar_grid.size();
    const auto results = detail::parallel_map(n_cells * per_cell, [&](std::size_t i) {
        const std::size_t cell = i / per_cell;
        Scenario s = base;
        s.asa_enabled = false;
        s.rates = {uwb_grid[cell / radar_grid.size()], radar_grid[cell % radar_grid.size()]};
        s.seed = seeds[i % per_cell];
        return rmse_cm(run_scenario(s));
    });

    for (std::size_t c = 0; c < n_cells; ++c) {
        SweepCell cell;
        cell.f_uwb = uwb_grid[c / radar_grid.size()];
        cell.f_radar = radar_grid[c % radar_grid.size()];
        cell.rmse_cm.assign(results.begin() + static_cast<std::ptrdiff_t>(c * per_cell),
                            results.begin() + static_cast<std::ptrdiff_t>((c + 1) * per_cell));
        cell.stats = sample_stats(cell.rmse_cm);
        cell.sensing_power = sensing_power(cell.f_uwb, cell.f_radar, base.power);
        out.cells.push_back(std::move(cell));
    }
    return out;
}

}  // namespace locfuse
