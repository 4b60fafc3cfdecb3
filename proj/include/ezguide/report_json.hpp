/**
 * @file report_json.hpp
 * @brief summary.json and sweep_report.json documents.
 *
 * Both carry "schema_version". Non-finite numbers (for example min_b with no
 * defenders) are written as null.
 */
#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "ezguide/analysis.hpp"
#include "ezguide/errors.hpp"
#include "ezguide/sweep.hpp"

namespace ezguide {

inline constexpr int kSummarySchemaVersion = 1;
inline constexpr int kSweepSchemaVersion = 1;

namespace detail {

inline nlohmann::ordered_json finite_or_null(double v) {
    return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
}

inline nlohmann::ordered_json outcome_json(const Outcome& o) {
    return {{"kind", to_string(o.kind)},
            {"t", o.t},
            {"defender_id", o.defender_id >= 0 ? nlohmann::ordered_json(o.defender_id) : nlohmann::ordered_json(nullptr)}};
}

}  // namespace detail

inline nlohmann::ordered_json summary_json(const Scenario& scn, const TrajectoryLog& log) {
    using detail::finite_or_null;
    const RunSummary& s = log.summary;
    nlohmann::ordered_json j;
    j["schema_version"] = kSummarySchemaVersion;
    j["outcome"] = to_string(log.outcome.kind);
    j["event"] = detail::outcome_json(log.outcome);
    j["t_f"] = s.t_f;
    j["min_b"] = finite_or_null(s.min_b);
    j["min_clearance"] = finite_or_null(s.min_clearance);
    j["max_abs_a_A"] = s.max_abs_a;
    j["final_r_AT"] = s.final_r_AT;
    j["final_sigma_AT"] = s.final_sigma_AT;
    j["mean_abs_z_tail"] = s.mean_abs_z_tail;
    j["steps"] = s.steps;
    j["degenerate_steps"] = s.degenerate_steps;
    j["floored_steps"] = s.floored_steps;
    j["h_negative_crossings"] = s.h_negative_crossings;

    nlohmann::ordered_json episodes = nlohmann::ordered_json::array();
    for (const auto& e : saturation_episodes(log, scn.params.a_max)) episodes.push_back({e.t0, e.t1});
    j["saturation"] = {{"threshold", 0.95 * scn.params.a_max}, {"episodes", episodes}};

    nlohmann::ordered_json defenders = nlohmann::ordered_json::array();
    for (const auto& d : defender_stats(log, scn.params.eps_margin)) {
        defenders.push_back({{"id", d.id},
                             {"min_r", finite_or_null(d.min_r)},
                             {"min_b", finite_or_null(d.min_b)},
                             {"min_clearance", finite_or_null(d.min_clearance)}});
    }
    j["defenders"] = defenders;
    j["settings"] = {{"dt", scn.dt},
                     {"t_max", scn.t_max},
                     {"capture_radius", scn.capture_radius},
                     {"eps_margin", scn.params.eps_margin},
                     {"switch_mode", to_string(scn.params.switch_mode)}};
    return j;
}

inline nlohmann::ordered_json sweep_report_json(const SweepReport& rep, std::uint64_t seed) {
    nlohmann::ordered_json j;
    j["schema_version"] = kSweepSchemaVersion;
    j["seed"] = seed;
    j["total"] = rep.total;
    j["valid"] = rep.valid;
    j["intercepted"] = rep.intercepted;
    j["violations"] = rep.violations;
    j["timeouts"] = rep.timeouts;
    j["invalid_starts"] = rep.invalid_starts;
    j["errors"] = rep.errors;
    j["h_negative_crossings"] = rep.h_negative_crossings;
    j["empty_valid"] = rep.empty_valid;
    j["success_rate"] = rep.empty_valid ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(rep.success_rate);
    j["violation_rate"] = rep.empty_valid ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(rep.violation_rate);
    j["min_b_histogram"] = {{"lo", rep.min_b_histogram.lo},
                            {"hi", rep.min_b_histogram.hi},
                            {"counts", rep.min_b_histogram.counts}};
    nlohmann::ordered_json runs = nlohmann::ordered_json::array();
    for (const auto& r : rep.runs) {
        nlohmann::ordered_json run{{"index", r.index},
                           {"start", {{"x", r.start.x}, {"y", r.start.y}, {"gamma", r.start.gamma}}}};
        if (!r.error.empty()) {
            run["error"] = r.error;
        } else {
            run["outcome"] = detail::outcome_json(r.outcome);
            run["t_f"] = r.summary.t_f;
            run["min_b"] = detail::finite_or_null(r.summary.min_b);
            run["min_clearance"] = detail::finite_or_null(r.summary.min_clearance);
            run["max_abs_a_A"] = r.summary.max_abs_a;
        }
        runs.push_back(std::move(run));
    }
    j["runs"] = runs;
    return j;
}

inline void write_json(const nlohmann::ordered_json& j, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << j.dump(2) << '\n';
    if (!out) throw Error("failed writing '" + path.string() + "'");
}

}  // namespace ezguide
