/**
 * @file guidance.hpp
 * @brief Input-constrained, engagement-zone-aware intercept guidance.
 *
 * The stack evaluated once per control step:
 *   1. per-defender safety values b_i and their log-sum-exp aggregate h;
 *   2. intercept command a_T (drives sigma_AT to zero at rate K_I);
 *   3. safety command a_b (drives h to zero at rate K_s);
 *   4. switching weight alpha(h) and blended desired command a_d;
 *   5. commanded input a_c for the saturation dynamics
 *        a_A' = [1 - (a_A / a_max)^n] a_c - p1 a_A
 *      which keeps |a_A| < a_max whatever a_c is.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ezguide/errors.hpp"
#include "ezguide/ez_geometry.hpp"
#include "ezguide/safety_aggregation.hpp"

namespace ezguide {

enum class SwitchMode { Discontinuous, Smooth };

inline const char* to_string(SwitchMode m) {
    return m == SwitchMode::Smooth ? "smooth" : "discontinuous";
}

struct GuidanceParams {
    double K_s{0.3};          ///< safety gain, 1/s
    double K_I{0.7};          ///< intercept gain, 1/s
    double K_a{3.5};          ///< acceleration-tracking gain, m/s^3
    double beta{0.3};         ///< log-sum-exp smoothing, m
    double eps_margin{0.2};   ///< safety margin inside b_i, m
    double eps_alpha{0.1};    ///< smooth switch centre, m
    double delta{0.1};        ///< smooth switch width, m
    double eps_h{0.1};        ///< discontinuous switch threshold, m
    double a_max{1.0};        ///< lateral acceleration bound, m/s^2
    int sat_n{2};             ///< saturation exponent, even, >= 2
    double p1{0.2};           ///< saturation leak, 1/s
    SwitchMode switch_mode{SwitchMode::Smooth};
    double sign_boundary_layer{0.05};  ///< width of the smoothed sign(z), m/s^2
    double denom_floor{1e-4};          ///< |sum w_i grad_i| below this is degenerate, m/rad
    double sat_denom_floor{1e-6};      ///< floor on 1 - (a_A/a_max)^n
    double rate_filter_steps{10.0};    ///< a_d rate filter time constant, in steps

    void validate() const {
        auto positive = [](double v, const char* name) {
            if (!(v > 0.0) || !std::isfinite(v))
                throw ParameterError(std::string(name) + " must be > 0");
        };
        positive(K_s, "K_s");
        positive(K_I, "K_I");
        positive(K_a, "K_a");
        positive(beta, "beta");
        positive(delta, "delta");
        positive(a_max, "a_max");
        positive(p1, "p1");
        positive(sat_denom_floor, "sat_denom_floor");
        positive(rate_filter_steps, "rate_filter_steps");
        if (!(eps_margin >= 0.0) || !std::isfinite(eps_margin))
            throw ParameterError("eps_margin must be >= 0");
        if (!std::isfinite(eps_alpha)) throw ParameterError("eps_alpha must be finite");
        if (!std::isfinite(eps_h)) throw ParameterError("eps_h must be finite");
        if (sat_n < 2 || sat_n % 2 != 0) throw ParameterError("sat_n must be an even integer >= 2");
        if (!(sign_boundary_layer >= 0.0)) throw ParameterError("sign_boundary_layer must be >= 0");
        if (!(denom_floor >= 0.0)) throw ParameterError("denom_floor must be >= 0");
    }

    friend bool operator==(const GuidanceParams&, const GuidanceParams&) = default;
};

/// a_T = -K_I v sigma - v^2 sin(sigma) / r.
inline double intercept_accel(double v_A, const RelativePolar& target, double K_I) {
    if (!(target.r > kMinRange)) throw DegenerateRangeError("intercept_accel with zero range");
    return -K_I * v_A * target.sigma - v_A * v_A * std::sin(target.sigma) / target.r;
}

/// Sum of w_i * grad_rho_i, the denominator of the safety command.
inline double weighted_gradient(std::span<const double> weights, std::span<const SafetyValue> svs) {
    if (weights.size() != svs.size()) throw Error("weighted_gradient: length mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < svs.size(); ++i) acc += weights[i] * svs[i].grad_rho;
    return acc;
}

/// Safety command that makes h_dot = -K_s h. Returns nullopt when the
/// weighted gradient is below denom_floor (the law is singular there).
inline std::optional<double> safe_accel(double v_A, double K_s, const AggregateSafety& agg,
                                        std::span<const SafetyValue> svs, double denom_floor) {
    if (svs.empty() || agg.weights.size() != svs.size())
        throw Error("safe_accel: safety values and weights must be non-empty and aligned");
    double num = v_A * K_s * agg.h;
    double den = 0.0;
    for (std::size_t i = 0; i < svs.size(); ++i) {
        const SafetyValue& sv = svs[i];
        const double s = sv.polar.sigma;
        num -= v_A * v_A * agg.weights[i] *
               (std::cos(s) + sv.grad_rho / sv.polar.r * std::sin(s));
        den += agg.weights[i] * sv.grad_rho;
    }
    if (std::abs(den) < denom_floor || den == 0.0) return std::nullopt;
    return num / den;
}

/// Blend weight; 1 selects the safety command, 0 the intercept command.
inline double switch_alpha(double h, const GuidanceParams& p) {
    if (p.switch_mode == SwitchMode::Discontinuous) return h < p.eps_h ? 1.0 : 0.0;
    return 1.0 / (1.0 + std::exp((h - p.eps_alpha) / p.delta));
}

inline double saturation_rate(double a_A, double a_c, const GuidanceParams& p) {
    return (1.0 - std::pow(a_A / p.a_max, p.sat_n)) * a_c - p.p1 * a_A;
}

/// Boundary-layer sign: odd, clamped to [-1, 1], exact sign outside the layer.
inline double sgn_smooth(double z, double width) {
    if (width <= 0.0) return z > 0.0 ? 1.0 : (z < 0.0 ? -1.0 : 0.0);
    return std::clamp(z / width, -1.0, 1.0);
}

/// Everything the commanded-acceleration law needs from the current step.
struct CommandTerms {
    double a_A{0.0};
    double alpha{0.0};
    double h{0.0};
    double sigma_AT{0.0};
    double v_A{1.0};
    double weighted_grad{0.0};  ///< sum w_i grad_rho_i
    double a_d_dot{0.0};
    double z{0.0};
};

struct CommandResult {
    double a_c{0.0};
    double numerator{0.0};  ///< a_c before division by the saturation factor
    bool denominator_floored{false};
};

/// 1 - (a_A / a_max)^n, floored at sat_denom_floor.
inline double saturation_divisor(double a_A, const GuidanceParams& p) {
    return std::max(1.0 - std::pow(a_A / p.a_max, p.sat_n), p.sat_denom_floor);
}

inline CommandResult commanded_accel(const CommandTerms& t, const GuidanceParams& p) {
    double safety_term = 0.0;
    if (t.alpha != 0.0 && std::isfinite(t.h)) safety_term = t.alpha * t.h * t.weighted_grad / t.v_A;

    CommandResult out;
    out.numerator = p.p1 * t.a_A + t.a_d_dot + (t.alpha - 1.0) * t.sigma_AT / t.v_A + safety_term -
                    p.K_a * sgn_smooth(t.z, p.sign_boundary_layer);
    out.denominator_floored = 1.0 - std::pow(t.a_A / p.a_max, p.sat_n) < p.sat_denom_floor;
    out.a_c = out.numerator / saturation_divisor(t.a_A, p);
    return out;
}

/// One-step memory for the a_d rate estimate. Owned by the caller.
struct GuidanceMemory {
    bool has_prev{false};
    double prev_a_d{0.0};
    double rate{0.0};
};

/// Filtered backward difference of a_d: single-pole low-pass with time
/// constant rate_filter_steps * dt, zero on the first step.
inline GuidanceMemory update_rate_estimate(const GuidanceMemory& m, double a_d, double dt,
                                           const GuidanceParams& p) {
    GuidanceMemory next;
    next.has_prev = true;
    next.prev_a_d = a_d;
    if (!m.has_prev) {
        next.rate = 0.0;
        return next;
    }
    const double raw = (a_d - m.prev_a_d) / dt;
    const double tau = p.rate_filter_steps * dt;
    next.rate = m.rate + (dt / (tau + dt)) * (raw - m.rate);
    return next;
}

/// Static engagement geometry seen by the controller.
struct Engagement {
    Vec2 target{};
    std::span<const DefenderSpec> defenders{};
    double v_A{1.0};
};

struct GuidanceOutput {
    double a_T{0.0};
    std::optional<double> a_b;     ///< absent with no defenders or a singular law
    double a_b_applied{0.0};       ///< value blended into a_d (fallback when degenerate)
    bool degenerate{false};        ///< singular safety law replaced by the fallback turn
    double alpha{0.0};
    double a_d{0.0};
    double a_d_dot{0.0};
    double a_c{0.0};
    double a_c_numerator{0.0};     ///< held across the integration step
    double z{0.0};
    double h{std::numeric_limits<double>::infinity()};
    double weighted_grad{0.0};
    bool denominator_floored{false};
    std::vector<double> b_values;
};

struct GuidanceStep {
    GuidanceOutput out;
    GuidanceMemory memory;
    RelativePolar target{};
    std::vector<SafetyValue> safety;
};

inline GuidanceStep guidance_step(const AttackerState& attacker, const Engagement& eng,
                                  const GuidanceParams& p, const GuidanceMemory& memory, double dt) {
    GuidanceStep step;
    GuidanceOutput& o = step.out;

    step.target = relative_polar(attacker, eng.target);
    o.a_T = intercept_accel(eng.v_A, step.target, p.K_I);

    if (eng.defenders.empty()) {
        o.h = std::numeric_limits<double>::infinity();
        o.alpha = 0.0;
        o.a_d = o.a_T;
    } else {
        step.safety.reserve(eng.defenders.size());
        o.b_values.reserve(eng.defenders.size());
        for (const DefenderSpec& d : eng.defenders) {
            step.safety.push_back(safety_value(attacker, d, p.eps_margin));
            o.b_values.push_back(step.safety.back().b);
        }
        const AggregateSafety agg = aggregate(o.b_values, p.beta);
        o.h = agg.h;
        o.weighted_grad = weighted_gradient(agg.weights, step.safety);
        o.alpha = switch_alpha(o.h, p);
        o.a_b = safe_accel(eng.v_A, p.K_s, agg, step.safety, p.denom_floor);

        if (o.a_b) {
            o.a_b_applied = *o.a_b;
        } else {
            // Turn away from the most threatening zone; ties break positive.
            o.degenerate = o.alpha > 0.0;
            const auto k = static_cast<std::size_t>(
                std::max_element(agg.weights.begin(), agg.weights.end()) - agg.weights.begin());
            const double s = step.safety[k].polar.sigma;
            o.a_b_applied = s >= 0.0 ? p.a_max : -p.a_max;
        }
        o.a_d = o.alpha * o.a_b_applied + (1.0 - o.alpha) * o.a_T;
    }

    step.memory = update_rate_estimate(memory, o.a_d, dt, p);
    o.a_d_dot = step.memory.rate;
    o.z = attacker.a_A - o.a_d;

    const CommandResult cmd = commanded_accel(
        {attacker.a_A, o.alpha, o.h, step.target.sigma, eng.v_A, o.weighted_grad, o.a_d_dot, o.z}, p);
    o.a_c = cmd.a_c;
    o.a_c_numerator = cmd.numerator;
    o.denominator_floored = cmd.denominator_floored;
    return step;
}

}  // namespace ezguide
