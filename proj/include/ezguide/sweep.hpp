/**
 * @file sweep.hpp
 * @brief Monte-Carlo sweeps over attacker start positions and headings.
 *
 * Starts are drawn serially from the scenario seed, then run in parallel.
 * Results are stored by run index, so the report does not depend on the
 * number of worker threads.
 */
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <limits>
#include <random>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "ezguide/errors.hpp"
#include "ezguide/simulator.hpp"

namespace ezguide {

enum class HeadingMode { Target, Uniform };

inline const char* to_string(HeadingMode m) { return m == HeadingMode::Target ? "target" : "uniform"; }

/// Starts uniform in area on the annulus r_min <= |p - target| <= r_max.
struct RingSampler {
    double r_min{6.0};
    double r_max{9.0};
    std::size_t count{100};
    HeadingMode heading{HeadingMode::Target};
    bool valid_only{true};  ///< redraw starts that lie inside a hard zone
};

/// Regular nx-by-ny lattice, corners included.
struct GridSampler {
    double x_min{-8.0};
    double x_max{8.0};
    double y_min{-8.0};
    double y_max{8.0};
    std::size_t nx{5};
    std::size_t ny{5};
    HeadingMode heading{HeadingMode::Target};
};

/// Just the scenario's own initial state.
struct SingletonSampler {};

using Sampler = std::variant<RingSampler, GridSampler, SingletonSampler>;

namespace detail {

inline AttackerState make_start(double x, double y, HeadingMode mode, const Scenario& base,
                                std::mt19937_64& rng) {
    AttackerState s{x, y, 0.0, base.attacker_init.a_A};
    if (mode == HeadingMode::Target && (Vec2{x, y} - base.target).norm() > kMinRange) {
        s.gamma = heading_to(s, base.target);
    } else {
        std::uniform_real_distribution<double> u(-kPi, kPi);
        s.gamma = wrap_angle(u(rng));
    }
    return s;
}

}  // namespace detail

/// Draw the start states for a sweep. Deterministic given base.seed.
inline std::vector<AttackerState> sample_starts(const Scenario& base, const Sampler& sampler) {
    std::mt19937_64 rng(base.seed);
    std::vector<AttackerState> out;

    if (std::holds_alternative<SingletonSampler>(sampler)) {
        out.push_back(base.attacker_init);
        return out;
    }

    if (const auto* g = std::get_if<GridSampler>(&sampler)) {
        if (g->nx == 0 || g->ny == 0) throw ParameterError("grid sampler needs nx, ny >= 1");
        if (!(g->x_max >= g->x_min) || !(g->y_max >= g->y_min))
            throw ParameterError("grid sampler bounds are inverted");
        auto lerp = [](double lo, double hi, std::size_t i, std::size_t n) {
            return n == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
        };
        for (std::size_t j = 0; j < g->ny; ++j)
            for (std::size_t i = 0; i < g->nx; ++i)
                out.push_back(detail::make_start(lerp(g->x_min, g->x_max, i, g->nx),
                                                 lerp(g->y_min, g->y_max, j, g->ny), g->heading, base, rng));
        return out;
    }

    const auto& ring = std::get<RingSampler>(sampler);
    if (!(ring.r_min >= 0.0) || !(ring.r_max >= ring.r_min))
        throw ParameterError("ring sampler needs 0 <= r_min <= r_max");
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const std::size_t max_draws = 1000 * std::max<std::size_t>(ring.count, 1);
    std::size_t draws = 0;
    Scenario probe = base;
    while (out.size() < ring.count) {
        if (++draws > max_draws) throw ParameterError("ring sampler could not find enough valid starts");
        const double angle = 2.0 * kPi * u01(rng);
        const double r2 = ring.r_min * ring.r_min + (ring.r_max * ring.r_max - ring.r_min * ring.r_min) * u01(rng);
        const double r = std::sqrt(r2);
        AttackerState s = detail::make_start(base.target.x + r * std::cos(angle),
                                             base.target.y + r * std::sin(angle), ring.heading, base, rng);
        probe.attacker_init = s;
        if (ring.valid_only && start_violation(probe) >= 0) continue;
        out.push_back(s);
    }
    return out;
}

struct SweepRun {
    std::size_t index{0};
    AttackerState start{};
    Outcome outcome{};
    RunSummary summary{};
    std::string error;  ///< non-empty when the run threw; such runs count as errors
};

struct Histogram {
    double lo{0.0};
    double hi{0.0};
    std::vector<std::size_t> counts;
};

struct SweepReport {
    std::vector<SweepRun> runs;
    std::size_t total{0};
    std::size_t valid{0};  ///< everything except InvalidStart and errored runs
    std::size_t intercepted{0};
    std::size_t violations{0};
    std::size_t timeouts{0};
    std::size_t invalid_starts{0};
    std::size_t errors{0};
    std::size_t h_negative_crossings{0};  ///< summed over valid runs
    bool empty_valid{false};              ///< rates below are over an empty set
    double success_rate{0.0};
    double violation_rate{0.0};
    Histogram min_b_histogram;
};

/// Equal-width histogram over [min, max] of the samples. A single distinct
/// value gets a unit-wide range around it.
inline Histogram make_histogram(const std::vector<double>& xs, std::size_t bins) {
    Histogram h;
    h.counts.assign(bins, 0);
    if (xs.empty() || bins == 0) return h;
    h.lo = *std::min_element(xs.begin(), xs.end());
    h.hi = *std::max_element(xs.begin(), xs.end());
    if (!(h.hi > h.lo)) {
        h.lo -= 0.5;
        h.hi += 0.5;
    }
    const double width = (h.hi - h.lo) / static_cast<double>(bins);
    for (double x : xs) {
        auto k = static_cast<std::size_t>((x - h.lo) / width);
        ++h.counts[std::min(k, bins - 1)];
    }
    return h;
}

inline SweepReport summarize(std::vector<SweepRun> runs, std::size_t histogram_bins = 20) {
    SweepReport rep;
    rep.total = runs.size();
    std::vector<double> min_bs;
    for (const SweepRun& r : runs) {
        if (!r.error.empty()) {
            ++rep.errors;
            continue;
        }
        switch (r.outcome.kind) {
            case OutcomeKind::InvalidStart: ++rep.invalid_starts; continue;
            case OutcomeKind::Intercepted: ++rep.intercepted; break;
            case OutcomeKind::EZViolation: ++rep.violations; break;
            case OutcomeKind::Timeout: ++rep.timeouts; break;
        }
        ++rep.valid;
        rep.h_negative_crossings += r.summary.h_negative_crossings;
        if (std::isfinite(r.summary.min_b)) min_bs.push_back(r.summary.min_b);
    }
    rep.empty_valid = rep.valid == 0;
    if (!rep.empty_valid) {
        rep.success_rate = static_cast<double>(rep.intercepted) / static_cast<double>(rep.valid);
        rep.violation_rate = static_cast<double>(rep.violations) / static_cast<double>(rep.valid);
    }
    rep.min_b_histogram = make_histogram(min_bs, histogram_bins);
    rep.runs = std::move(runs);
    return rep;
}

/// Run base with each start in turn on up to `jobs` threads (0 means the
/// hardware concurrency). Per-run exceptions are recorded, not rethrown.
inline SweepReport monte_carlo_sweep(const Scenario& base, const std::vector<AttackerState>& starts,
                                     unsigned jobs = 1) {
    base.validate();
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(starts.size(), 1)));

    std::vector<SweepRun> runs(starts.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < starts.size(); i = next++) {
            SweepRun& run = runs[i];
            run.index = i;
            run.start = starts[i];
            try {
                Scenario scn = base;
                scn.attacker_init = starts[i];
                const TrajectoryLog log = run_scenario(scn, {.record_rows = false});
                run.outcome = log.outcome;
                run.summary = log.summary;
            } catch (const std::exception& e) {
                run.error = e.what();
            }
        }
    };

    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(jobs);
        for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    }
    return summarize(std::move(runs));
}

inline SweepReport monte_carlo_sweep(const Scenario& base, const Sampler& sampler, unsigned jobs = 1) {
    return monte_carlo_sweep(base, sample_starts(base, sampler), jobs);
}

}  // namespace ezguide
