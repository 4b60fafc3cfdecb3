/**
 * @file simulator.hpp
 * @brief Fixed-step closed-loop simulation of the attacker under the guidance stack.
 *
 * State is (x, y, gamma, a_A) in Cartesian form; the polar quantities the
 * controller needs are recomputed from it every step.
 *
 * Two integrators are provided. rk4_step holds a_c constant, which is the
 * plain saturation model driven by an arbitrary command. The closed loop
 * instead holds the command numerator N = a_c [1 - (a_A / a_max)^n]
 * (rk4_step_held_numerator): the guidance law divides by that factor, and
 * freezing the quotient at the start of a step turns a tiny divisor into an
 * enormous gain for the whole step.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "ezguide/errors.hpp"
#include "ezguide/ez_geometry.hpp"
#include "ezguide/guidance.hpp"

namespace ezguide {

/// Classical 4-stage Runge-Kutta step for y' = f(y).
template <std::size_t N, class F>
std::array<double, N> rk4_integrate(const F& f, const std::array<double, N>& y, double dt) {
    auto axpy = [](const std::array<double, N>& a, double s, const std::array<double, N>& b) {
        std::array<double, N> out;
        for (std::size_t i = 0; i < N; ++i) out[i] = a[i] + s * b[i];
        return out;
    };
    const auto k1 = f(y);
    const auto k2 = f(axpy(y, 0.5 * dt, k1));
    const auto k3 = f(axpy(y, 0.5 * dt, k2));
    const auto k4 = f(axpy(y, dt, k3));
    std::array<double, N> out;
    for (std::size_t i = 0; i < N; ++i)
        out[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

using StateVector = std::array<double, 4>;

inline StateVector to_vector(const AttackerState& s) { return {s.x, s.y, s.gamma, s.a_A}; }

/// (x', y', gamma', a_A') for a frozen command a_c.
inline StateVector state_derivative(const StateVector& s, double a_c, double v_A,
                                    const GuidanceParams& p) {
    return {v_A * std::cos(s[2]), v_A * std::sin(s[2]), s[3] / v_A, saturation_rate(s[3], a_c, p)};
}

inline StateVector state_derivative(const AttackerState& s, double a_c, double v_A,
                                    const GuidanceParams& p) {
    return state_derivative(to_vector(s), a_c, v_A, p);
}

/// Number of RK4 sub-steps needed to keep dt * |d a_A' / d a_A| <= 1 for a
/// frozen command. Large |a_c| makes the saturation dynamics stiff.
inline std::size_t rk4_substeps(double dt, double a_c, const GuidanceParams& p) {
    const double stiffness = p.sat_n * std::abs(a_c) / p.a_max + p.p1;
    const double m = std::ceil(dt * stiffness);
    if (!(m > 1.0)) return 1;
    return static_cast<std::size_t>(std::min(m, 1e5));
}

/// One RK4 step with a_c held. Ordinary commands take a single classical
/// step; stiff ones are split evenly (see rk4_substeps). gamma is re-wrapped;
/// a_A is clamped just inside the bound, which only matters if round-off
/// lands on it.
inline AttackerState rk4_step(const AttackerState& s, double dt, double a_c, double v_A,
                              const GuidanceParams& p) {
    const auto f = [&](const StateVector& v) { return state_derivative(v, a_c, v_A, p); };
    const std::size_t m = rk4_substeps(dt, a_c, p);
    const double h = dt / static_cast<double>(m);
    StateVector y = to_vector(s);
    for (std::size_t i = 0; i < m; ++i) y = rk4_integrate(f, y, h);
    const double guard = p.a_max - 1e-12;
    return {y[0], y[1], wrap_angle(y[2]), std::clamp(y[3], -guard, guard)};
}

/// Largest |a_A| outside the floored layer, where 1 - (a_A/a_max)^n = sat_denom_floor.
inline double saturation_layer_edge(const GuidanceParams& p) {
    return p.a_max * std::pow(1.0 - p.sat_denom_floor, 1.0 / p.sat_n);
}

/// One RK4 step of the closed loop with the command numerator held. Inside
/// the bound the saturation factor cancels and a_A' = N - p1 a_A. The floored
/// layer next to +-a_max (width of order sat_denom_floor) is collapsed onto
/// its edge: a_A stops there while N pushes outward.
inline AttackerState rk4_step_held_numerator(const AttackerState& s, double dt, double numerator,
                                             double v_A, const GuidanceParams& p) {
    const double edge = saturation_layer_edge(p);
    const auto f = [&](const StateVector& v) -> StateVector {
        const double a = std::clamp(v[3], -edge, edge);
        double a_rate = numerator - p.p1 * v[3];
        if ((v[3] >= edge && a_rate > 0.0) || (v[3] <= -edge && a_rate < 0.0)) a_rate = 0.0;
        return {v_A * std::cos(v[2]), v_A * std::sin(v[2]), a / v_A, a_rate};
    };
    const StateVector y = rk4_integrate(f, to_vector(s), dt);
    return {y[0], y[1], wrap_angle(y[2]), std::clamp(y[3], -edge, edge)};
}

struct Scenario {
    AttackerState attacker_init{};
    double v_A{1.0};
    Vec2 target{};
    std::vector<DefenderSpec> defenders;
    GuidanceParams params{};
    double dt{1e-3};
    double t_max{30.0};
    double capture_radius{0.05};
    std::uint64_t seed{0};

    void validate() const {
        if (!(dt > 0.0) || !std::isfinite(dt)) throw ParameterError("dt must be > 0");
        if (!(t_max > dt) || !std::isfinite(t_max)) throw ParameterError("t_max must exceed dt");
        if (!(capture_radius > 0.0)) throw ParameterError("capture_radius must be > 0");
        if (!(v_A > 0.0) || !std::isfinite(v_A)) throw ParameterError("v_A must be > 0");
        if (!std::isfinite(attacker_init.x) || !std::isfinite(attacker_init.y) ||
            !std::isfinite(attacker_init.gamma))
            throw ParameterError("attacker state must be finite");
        if (!(std::abs(attacker_init.a_A) < params.a_max))
            throw ParameterError("initial a_A must satisfy |a_A| < a_max");
        params.validate();
        for (const auto& d : defenders) d.validate();
    }

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Heading that points the attacker straight at the target.
inline double heading_to(const AttackerState& a, const Vec2& target) {
    return std::atan2(target.y - a.y, target.x - a.x);
}

enum class OutcomeKind { Intercepted, EZViolation, Timeout, InvalidStart };

inline const char* to_string(OutcomeKind k) {
    switch (k) {
        case OutcomeKind::Intercepted: return "Intercepted";
        case OutcomeKind::EZViolation: return "EZViolation";
        case OutcomeKind::Timeout: return "Timeout";
        case OutcomeKind::InvalidStart: return "InvalidStart";
    }
    return "?";
}

struct Outcome {
    OutcomeKind kind{OutcomeKind::Timeout};
    double t{0.0};
    int defender_id{-1};  ///< set for EZViolation / InvalidStart
};

struct DefenderSample {
    double r{0.0};
    double sigma{0.0};
    double b{0.0};
};

struct TrajectoryRow {
    double t{0.0};
    AttackerState state{};
    GuidanceOutput guidance{};
    double r_AT{0.0};
    double sigma_AT{0.0};
    std::vector<DefenderSample> defenders;
};

struct RunSummary {
    double t_f{0.0};
    double min_b{std::numeric_limits<double>::infinity()};          ///< min over t of min_i b_i
    double min_clearance{std::numeric_limits<double>::infinity()};  ///< min over t of r - rho
    double max_abs_a{0.0};
    double final_sigma_AT{0.0};
    double final_r_AT{0.0};
    double mean_abs_z_tail{0.0};  ///< mean |z| over the final 10% of rows
    std::size_t steps{0};
    std::size_t degenerate_steps{0};
    std::size_t floored_steps{0};
    std::size_t h_negative_crossings{0};  ///< h went from > 0 to < 0 with |a_A| < a_max
};

struct TrajectoryLog {
    std::vector<TrajectoryRow> rows;
    Outcome outcome{};
    RunSummary summary{};
    std::vector<int> defender_ids;
};

/// Id of the first defender whose hard zone contains the attacker's initial
/// state, or -1 when the start is valid.
inline int start_violation(const Scenario& scn) {
    for (const auto& d : scn.defenders) {
        const Vec2 delta = d.origin - scn.attacker_init.position();
        if (delta.norm() <= kMinRange || ez_contains(scn.attacker_init, d)) return d.id;
    }
    return -1;
}

struct RunOptions {
    bool record_rows{true};
};

inline TrajectoryLog run_scenario(const Scenario& scn, const RunOptions& opts = {}) {
    scn.validate();
    TrajectoryLog log;
    for (const auto& d : scn.defenders) log.defender_ids.push_back(d.id);

    const Engagement eng{scn.target, scn.defenders, scn.v_A};
    const auto& p = scn.params;
    const auto last_step = static_cast<std::size_t>(std::ceil(scn.t_max / scn.dt - 1e-9));

    if (const int id = start_violation(scn); id >= 0) {
        log.outcome = {OutcomeKind::InvalidStart, 0.0, id};
        return log;
    }

    AttackerState state = scn.attacker_init;
    GuidanceMemory memory;
    RunSummary& sum = log.summary;
    double prev_h = std::numeric_limits<double>::quiet_NaN();

    // |z| is buffered so the tail mean is available without recording rows.
    std::vector<double> abs_z;

    for (std::size_t k = 0;; ++k) {
        const double t = static_cast<double>(k) * scn.dt;
        const GuidanceStep g = guidance_step(state, eng, p, memory, scn.dt);
        memory = g.memory;

        std::vector<DefenderSample> samples;
        samples.reserve(scn.defenders.size());
        int violated = -1;
        for (std::size_t i = 0; i < scn.defenders.size(); ++i) {
            const SafetyValue& sv = g.safety[i];
            samples.push_back({sv.polar.r, sv.polar.sigma, sv.b});
            sum.min_b = std::min(sum.min_b, sv.b);
            sum.min_clearance = std::min(sum.min_clearance, sv.polar.r - sv.rho);
            if (violated < 0 && sv.polar.r <= sv.rho) violated = scn.defenders[i].id;
        }
        sum.max_abs_a = std::max(sum.max_abs_a, std::abs(state.a_A));
        if (g.out.degenerate) ++sum.degenerate_steps;
        if (g.out.denominator_floored) ++sum.floored_steps;
        if (prev_h > 0.0 && g.out.h < 0.0 && std::abs(state.a_A) < p.a_max) ++sum.h_negative_crossings;
        prev_h = g.out.h;
        abs_z.push_back(std::abs(g.out.z));
        sum.final_sigma_AT = g.target.sigma;
        sum.final_r_AT = g.target.r;
        sum.t_f = t;
        sum.steps = k + 1;

        if (opts.record_rows) {
            log.rows.push_back({t, state, g.out, g.target.r, g.target.sigma, std::move(samples)});
        }

        bool done = true;
        if (violated >= 0) {
            log.outcome = {OutcomeKind::EZViolation, t, violated};
        } else if (g.target.r <= scn.capture_radius) {
            log.outcome = {OutcomeKind::Intercepted, t, -1};
        } else if (k >= last_step) {
            log.outcome = {OutcomeKind::Timeout, t, -1};
        } else {
            done = false;
        }
        if (done) break;

        state = rk4_step_held_numerator(state, scn.dt, g.out.a_c_numerator, scn.v_A, p);
    }

    const std::size_t tail = std::max<std::size_t>(1, abs_z.size() / 10);
    double acc = 0.0;
    for (std::size_t i = abs_z.size() - tail; i < abs_z.size(); ++i) acc += abs_z[i];
    sum.mean_abs_z_tail = acc / static_cast<double>(tail);
    return log;
}

}  // namespace ezguide
