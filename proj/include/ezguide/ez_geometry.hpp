/**
 * @file ez_geometry.hpp
 * @brief Engagement-zone geometry for range-limited defenders.
 *
 * A defender launched from a fixed origin with maximum travel R, capture
 * radius c and speed ratio mu = v_A / v_D can guarantee capture of an
 * attacker that holds its heading whenever r <= rho(sigma), where sigma is
 * the attacker's lead angle to the defender origin:
 *
 *     rho(sigma) = mu R [cos sigma + sqrt(cos^2 sigma - 1 + (R + c)^2 / (mu R)^2)]
 *
 * Conventions:
 *   - angles are wrapped to (-pi, pi];
 *   - theta is the world-frame bearing from the attacker to the point;
 *   - sigma = wrap(gamma - theta), so sigma = 0 means flying straight at it.
 *
 * Everything here is a pure function of its arguments.
 */
#pragma once

#include <cmath>
#include <concepts>
#include <numbers>
#include <string>

#include "ezguide/errors.hpp"

namespace ezguide {

inline constexpr double kPi = std::numbers::pi;

/// Plain 2D position / displacement in metres.
struct Vec2 {
    double x{0.0};
    double y{0.0};

    constexpr Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    double norm() const { return std::hypot(x, y); }

    friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

/// Wrap an angle to (-pi, pi].
template <std::floating_point T>
T wrap_angle(T a) {
    constexpr T pi = std::numbers::pi_v<T>;
    constexpr T two_pi = 2 * pi;
    if (a > -pi && a <= pi) return a;
    T w = std::fmod(a + pi, two_pi);
    if (w <= 0) w += two_pi;
    // w in (0, 2pi]; shifted result in (-pi, pi]
    T out = w - pi;
    if (out <= -pi) out = pi;
    return out;
}

/// One range-limited defender, modelled only through its engagement zone.
struct DefenderSpec {
    Vec2 origin{};
    double range_R{1.5};
    double capture_c{0.5};
    double mu{0.7};
    int id{1};

    /// Throws ParameterError naming the first violated invariant.
    void validate() const {
        if (!std::isfinite(origin.x) || !std::isfinite(origin.y))
            throw ParameterError("defender " + std::to_string(id) + ": origin must be finite");
        if (!(range_R > 0.0) || !std::isfinite(range_R))
            throw ParameterError("defender " + std::to_string(id) + ": range_R must be > 0");
        if (!(capture_c >= 0.0) || !std::isfinite(capture_c))
            throw ParameterError("defender " + std::to_string(id) + ": capture_c must be >= 0");
        if (!(mu > 0.0 && mu < 1.0))
            throw ParameterError("defender " + std::to_string(id) + ": mu must lie in (0,1)");
    }

    friend bool operator==(const DefenderSpec&, const DefenderSpec&) = default;
};

/// Attacker pose plus its actual lateral acceleration (a state of the
/// saturation dynamics).
struct AttackerState {
    double x{0.0};
    double y{0.0};
    double gamma{0.0};  ///< heading, rad, (-pi, pi]
    double a_A{0.0};    ///< lateral acceleration, m/s^2

    Vec2 position() const { return {x, y}; }

    friend bool operator==(const AttackerState&, const AttackerState&) = default;
};

/// Range, line-of-sight angle and lead angle from the attacker to a point.
struct RelativePolar {
    double r{0.0};
    double theta{0.0};
    double sigma{0.0};
};

inline constexpr double kMinRange = 1e-12;

inline RelativePolar relative_polar(const AttackerState& attacker, const Vec2& point) {
    const double dx = point.x - attacker.x;
    const double dy = point.y - attacker.y;
    const double r = std::hypot(dx, dy);
    if (!(r > kMinRange)) {
        throw DegenerateRangeError("attacker coincides with point (" + std::to_string(point.x) +
                                   ", " + std::to_string(point.y) + ")");
    }
    const double theta = std::atan2(dy, dx);
    return {r, theta, wrap_angle(attacker.gamma - theta)};
}

/// Argument of the square root in rho; strictly positive for valid specs.
template <std::floating_point T>
T ez_sqrt_argument(T sigma, T mu, T R, T c) {
    const T cs = std::cos(sigma);
    const T k = (R + c) / (mu * R);
    return cs * cs - 1 + k * k;
}

template <std::floating_point T>
T ez_boundary_rho(T sigma, T mu, T R, T c) {
    const T q = std::sqrt(ez_sqrt_argument(sigma, mu, R, c));
    return mu * R * (std::cos(sigma) + q);
}

/// Analytic d rho / d sigma.
template <std::floating_point T>
T ez_boundary_gradient(T sigma, T mu, T R, T c) {
    const T q = std::sqrt(ez_sqrt_argument(sigma, mu, R, c));
    return -mu * R * std::sin(sigma) * (1 + std::cos(sigma) / q);
}

inline double ez_boundary_rho(double sigma, const DefenderSpec& d) {
    return ez_boundary_rho(sigma, d.mu, d.range_R, d.capture_c);
}

inline double ez_boundary_gradient(double sigma, const DefenderSpec& d) {
    return ez_boundary_gradient(sigma, d.mu, d.range_R, d.capture_c);
}

/// Per-defender safety value; rho, grad and polar are kept for reuse by the
/// controller within the same step.
struct SafetyValue {
    double b{0.0};
    double rho{0.0};
    double grad_rho{0.0};
    RelativePolar polar{};
};

/// b = r - rho(sigma) - eps.
inline SafetyValue safety_value(const AttackerState& attacker, const DefenderSpec& d, double eps) {
    const RelativePolar p = relative_polar(attacker, d.origin);
    const double rho = ez_boundary_rho(p.sigma, d);
    return {p.r - rho - eps, rho, ez_boundary_gradient(p.sigma, d), p};
}

/// Hard engagement-zone membership, closed set r <= rho. No margin.
inline bool ez_contains(const AttackerState& attacker, const DefenderSpec& d) {
    const RelativePolar p = relative_polar(attacker, d.origin);
    return p.r <= ez_boundary_rho(p.sigma, d);
}

}  // namespace ezguide
