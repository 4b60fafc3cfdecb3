/**
 * @file checks.hpp
 * @brief Self-checks run by `ezguide check`: independent oracles for the
 * geometry, the aggregation, the saturation model and the integrator.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "ezguide/ez_geometry.hpp"
#include "ezguide/guidance.hpp"
#include "ezguide/safety_aggregation.hpp"
#include "ezguide/simulator.hpp"

namespace ezguide {

struct CheckResult {
    std::string name;
    bool passed{false};
    double measured{0.0};
    double tolerance{0.0};
    std::string detail;
};

inline DefenderSpec random_defender(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> mu(0.05, 0.95), R(0.1, 10.0), c(0.0, 5.0), xy(-10.0, 10.0);
    DefenderSpec d;
    d.mu = mu(rng);
    d.range_R = R(rng);
    d.capture_c = c(rng);
    d.origin = {xy(rng), xy(rng)};
    return d;
}

using GradientFn = std::function<double(double sigma, const DefenderSpec&)>;

/// Worst relative error of `grad` against a central difference of rho taken
/// in extended precision (step 1e-5 rad), over random (sigma, spec) pairs
/// with |sin sigma| >= 1e-8.
inline CheckResult check_gradient(std::size_t samples, std::uint64_t seed, GradientFn grad = {}) {
    if (!grad) grad = [](double s, const DefenderSpec& d) { return ez_boundary_gradient(s, d); };
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> sig(-kPi, kPi);
    const long double h = 1e-5L;
    double worst = 0.0;
    std::size_t done = 0;
    while (done < samples) {
        const DefenderSpec d = random_defender(rng);
        const double s = sig(rng);
        if (std::abs(std::sin(s)) < 1e-8) continue;
        ++done;
        const long double mu = d.mu, R = d.range_R, c = d.capture_c, sl = s;
        const long double fd = (ez_boundary_rho(sl + h, mu, R, c) - ez_boundary_rho(sl - h, mu, R, c)) / (2 * h);
        const double g = grad(s, d);
        const double err = static_cast<double>(std::abs(static_cast<long double>(g) - fd) / std::abs(fd));
        worst = std::max(worst, std::isfinite(err) ? err : std::numeric_limits<double>::infinity());
    }
    return {"gradient matches finite difference", worst <= 1e-6, worst, 1e-6,
            std::to_string(samples) + " samples, max relative error"};
}

/// min b - beta ln n <= h <= min b on random inputs; measured value is the
/// worst violation of either side (0 when both hold).
inline CheckResult check_lse_sandwich(std::size_t samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> n_dist(1, 12);
    std::uniform_real_distribution<double> b_dist(-20.0, 20.0), log_beta(std::log(1e-3), std::log(10.0));
    double worst = 0.0;
    std::vector<double> b;
    for (std::size_t k = 0; k < samples; ++k) {
        b.resize(static_cast<std::size_t>(n_dist(rng)));
        for (double& x : b) x = b_dist(rng);
        const double beta = std::exp(log_beta(rng));
        const AggregateSafety a = aggregate(b, beta);
        const double lo = a.min_b - beta * std::log(static_cast<double>(b.size()));
        worst = std::max({worst, lo - a.h, a.h - a.min_b});
        if (!std::isfinite(a.h)) worst = std::numeric_limits<double>::infinity();
    }
    return {"log-sum-exp sandwich", worst <= 1e-9, worst, 1e-9, std::to_string(samples) + " samples, worst excess"};
}

/// Integrate the saturation model for `seconds` under a bounded random-walk
/// command and return the largest |a_A| seen before any clamping.
inline double saturation_trial(std::mt19937_64& rng, const GuidanceParams& p, double dt, double seconds,
                               double command_bound) {
    std::normal_distribution<double> step(0.0, command_bound * std::sqrt(dt));
    double a_c = 0.0, a = 0.0, worst = 0.0;
    const auto n = static_cast<std::size_t>(std::llround(seconds / dt));
    for (std::size_t k = 0; k < n; ++k) {
        a_c = std::clamp(a_c + step(rng), -command_bound, command_bound);
        const auto f = [&](const std::array<double, 1>& y) {
            return std::array<double, 1>{saturation_rate(y[0], a_c, p)};
        };
        const std::size_t m = rk4_substeps(dt, a_c, p);
        std::array<double, 1> y{a};
        for (std::size_t i = 0; i < m; ++i) y = rk4_integrate(f, y, dt / static_cast<double>(m));
        a = y[0];
        worst = std::max(worst, std::abs(a));
    }
    return worst;
}

inline CheckResult check_saturation_bound(std::size_t trials, std::uint64_t seed, const GuidanceParams& p = {}) {
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (std::size_t k = 0; k < trials; ++k) worst = std::max(worst, saturation_trial(rng, p, 1e-3, 10.0, 20.0 * p.a_max));
    const double limit = p.a_max - 1e-9;
    return {"saturation keeps |a_A| < a_max", worst <= limit, worst, limit,
            std::to_string(trials) + " random-walk commands, 10 s each, max |a_A|"};
}

/// Observed order of rk4_step on a smooth 1 s segment from three step sizes.
inline double rk4_observed_order(const GuidanceParams& p = {}) {
    const AttackerState s0{0.0, 0.0, 0.3, 0.2};
    const double a_c = 0.5;
    auto run = [&](double dt) {
        AttackerState s = s0;
        const auto n = static_cast<int>(std::lround(1.0 / dt));
        double gamma_unwrapped = s.gamma;
        for (int k = 0; k < n; ++k) {
            const AttackerState next = rk4_step(s, dt, a_c, 1.0, p);
            gamma_unwrapped += wrap_angle(next.gamma - s.gamma);
            s = next;
        }
        return std::array<double, 4>{s.x, s.y, gamma_unwrapped, s.a_A};
    };
    const auto y1 = run(0.1), y2 = run(0.05), y3 = run(0.025);
    double e12 = 0.0, e23 = 0.0;
    for (int i = 0; i < 4; ++i) {
        e12 = std::max(e12, std::abs(y1[i] - y2[i]));
        e23 = std::max(e23, std::abs(y2[i] - y3[i]));
    }
    return std::log2(e12 / e23);
}

inline CheckResult check_rk4_order() {
    const double order = rk4_observed_order();
    return {"RK4 observed order", order >= 3.5, order, 3.5, "dt = 0.1, 0.05, 0.025 over 1 s"};
}

/// Least-squares slope of ln|v| against t over samples with |v| in [lo, hi].
inline double log_slope(const std::vector<double>& t, const std::vector<double>& v, double lo, double hi) {
    double n = 0, st = 0, sy = 0, stt = 0, sty = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double a = std::abs(v[i]);
        if (a < lo || a > hi) continue;
        const double y = std::log(a);
        n += 1;
        st += t[i];
        sy += y;
        stt += t[i] * t[i];
        sty += t[i] * y;
    }
    if (n < 3) return std::numeric_limits<double>::quiet_NaN();
    return (n * sty - st * sy) / (n * stt - st * st);
}

/// Kinematics with a_A replaced by the desired command, evaluated at every
/// RK4 stage (exact tracking, no saturation). Records (t, value(state)).
template <class Accel, class Value>
void forced_tracking_run(AttackerState s, double v_A, double dt, double seconds, Accel accel, Value value,
                         std::vector<double>& ts, std::vector<double>& vs) {
    const auto f = [&](const std::array<double, 3>& y) {
        const AttackerState st{y[0], y[1], y[2], 0.0};
        return std::array<double, 3>{v_A * std::cos(y[2]), v_A * std::sin(y[2]), accel(st) / v_A};
    };
    const auto n = static_cast<std::size_t>(std::llround(seconds / dt));
    std::array<double, 3> y{s.x, s.y, s.gamma};
    for (std::size_t k = 0; k <= n; ++k) {
        const AttackerState st{y[0], y[1], y[2], 0.0};
        ts.push_back(static_cast<double>(k) * dt);
        vs.push_back(value(st));
        if (k < n) y = rk4_integrate(f, y, dt);
    }
}

/// Decay rate of sigma_AT with no defenders under exact tracking of a_T.
inline double forced_intercept_rate(const GuidanceParams& p = {}, double dt = 1e-3) {
    const Vec2 target{0.0, 0.0};
    const AttackerState s0{-20.0, 0.0, 0.6, 0.0};
    std::vector<double> ts, vs;
    forced_tracking_run(
        s0, 1.0, dt, 12.0, [&](const AttackerState& s) { return intercept_accel(1.0, relative_polar(s, target), p.K_I); },
        [&](const AttackerState& s) { return relative_polar(s, target).sigma; }, ts, vs);
    return -log_slope(ts, vs, 1e-3, 1e-1);
}

/// Decay rate of h with one defender, alpha = 1 and exact tracking of a_b.
inline double forced_safety_rate(const GuidanceParams& p = {}, double dt = 1e-3) {
    const DefenderSpec d{};
    const AttackerState s0{-0.5, -4.0, 0.0, 0.0};
    const std::vector<DefenderSpec> defs{d};
    auto h_and_accel = [&](const AttackerState& s) {
        const SafetyValue sv = safety_value(s, d, p.eps_margin);
        const double b = sv.b;
        const AggregateSafety agg = aggregate(std::span<const double>(&b, 1), p.beta);
        const auto a = safe_accel(1.0, p.K_s, agg, std::span<const SafetyValue>(&sv, 1), p.denom_floor);
        return std::pair{agg.h, a.value_or(std::numeric_limits<double>::quiet_NaN())};
    };
    std::vector<double> ts, vs;
    forced_tracking_run(
        s0, 1.0, dt, 30.0, [&](const AttackerState& s) { return h_and_accel(s).second; },
        [&](const AttackerState& s) { return h_and_accel(s).first; }, ts, vs);
    return -log_slope(ts, vs, 1e-3, 1e-1);
}

inline CheckResult check_rate(const std::string& name, double measured, double expected) {
    const double rel = std::abs(measured - expected) / expected;
    return {name, std::isfinite(measured) && rel <= 0.05, measured, expected,
            "log-slope over |value| in [1e-3, 1e-1], tolerance 5%"};
}

inline std::vector<CheckResult> run_checks(std::size_t trials, std::uint64_t seed) {
    const GuidanceParams p{};
    std::vector<CheckResult> out;
    out.push_back(check_gradient(10 * trials, seed));
    out.push_back(check_lse_sandwich(10 * trials, seed + 1));
    out.push_back(check_saturation_bound(trials, seed + 2));
    out.push_back(check_rk4_order());
    out.push_back(check_rate("intercept decay rate = K_I", forced_intercept_rate(p), p.K_I));
    out.push_back(check_rate("safety decay rate = K_s", forced_safety_rate(p), p.K_s));
    return out;
}

}  // namespace ezguide
