#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "ezguide/simulator.hpp"

namespace ezguide {

struct Interval {
    double t0{0.0};
    double t1{0.0};
};

/// Maximal runs of rows where pred(row) holds, as [first t, last t].
template <class Pred>
std::vector<Interval> intervals_where(const TrajectoryLog& log, Pred pred) {
    std::vector<Interval> out;
    bool open = false;
    for (const auto& row : log.rows) {
        if (pred(row)) {
            if (!open) out.push_back({row.t, row.t});
            out.back().t1 = row.t;
            open = true;
        } else {
            open = false;
        }
    }
    return out;
}

/// Episodes with |a_A| >= fraction * a_max.
inline std::vector<Interval> saturation_episodes(const TrajectoryLog& log, double a_max, double fraction = 0.95) {
    return intervals_where(log, [&](const TrajectoryRow& r) { return std::abs(r.state.a_A) >= fraction * a_max; });
}

/// max |a_A| over rows with t in [t0, t1]; 0 when no row falls inside.
inline double max_abs_accel_between(const TrajectoryLog& log, double t0, double t1) {
    double m = 0.0;
    for (const auto& r : log.rows)
        if (r.t >= t0 && r.t <= t1) m = std::max(m, std::abs(r.state.a_A));
    return m;
}

struct DefenderStats {
    int id{0};
    double min_r{std::numeric_limits<double>::infinity()};
    double min_b{std::numeric_limits<double>::infinity()};
    double min_clearance{std::numeric_limits<double>::infinity()};  ///< r - rho, margin excluded
};

inline std::vector<DefenderStats> defender_stats(const TrajectoryLog& log, double eps_margin) {
    std::vector<DefenderStats> out;
    for (int id : log.defender_ids) out.push_back({id});
    for (const auto& row : log.rows) {
        for (std::size_t i = 0; i < row.defenders.size() && i < out.size(); ++i) {
            const auto& d = row.defenders[i];
            out[i].min_r = std::min(out[i].min_r, d.r);
            out[i].min_b = std::min(out[i].min_b, d.b);
            out[i].min_clearance = std::min(out[i].min_clearance, d.b + eps_margin);
        }
    }
    return out;
}

}  // namespace ezguide
