#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "ezguide/errors.hpp"
#include "ezguide/ez_geometry.hpp"

namespace ezguide {

/// Log-sum-exp soft minimum of the per-defender safety values.
struct AggregateSafety {
    double h{0.0};
    std::vector<double> weights;   ///< softmax weights, sum to 1
    std::vector<double> b_values;
    double min_b{0.0};
};

/// h = -beta log(sum exp(-b_i / beta)), evaluated after shifting by min b so
/// that no exponent is positive.
inline AggregateSafety aggregate(std::span<const double> b_values, double beta) {
    if (b_values.empty()) throw ParameterError("aggregate: b_values must be non-empty");
    if (!(beta > 0.0) || !std::isfinite(beta)) throw ParameterError("aggregate: beta must be > 0");

    AggregateSafety out;
    out.b_values.assign(b_values.begin(), b_values.end());
    out.min_b = *std::min_element(b_values.begin(), b_values.end());

    out.weights.resize(b_values.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < b_values.size(); ++i) {
        out.weights[i] = std::exp(-(b_values[i] - out.min_b) / beta);
        sum += out.weights[i];
    }
    for (double& w : out.weights) w /= sum;
    // sum >= 1 because the minimum contributes exp(0)
    out.h = out.min_b - beta * std::log(sum);
    return out;
}

/// Time derivative of b_i along the attacker kinematics.
inline double b_dot(double v_A, const SafetyValue& sv, double a_A) {
    const double r = sv.polar.r;
    if (!(r > kMinRange)) throw DegenerateRangeError("b_dot with zero range");
    const double s = sv.polar.sigma;
    return -v_A * std::cos(s) - (v_A / r) * sv.grad_rho * std::sin(s) - sv.grad_rho * a_A / v_A;
}

/// h_dot = sum w_i b_dot_i.
inline double h_dot(std::span<const double> weights, std::span<const double> b_dots) {
    if (weights.size() != b_dots.size()) throw Error("h_dot: weights and b_dots differ in length");
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) acc += weights[i] * b_dots[i];
    return acc;
}

}  // namespace ezguide
