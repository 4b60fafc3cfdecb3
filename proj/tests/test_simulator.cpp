#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "test_support.hpp"

using namespace ezguide;

TEST(StateDerivative, StraightFlight) {
    const auto d = state_derivative(AttackerState{0, 0, 0, 0}, 0.0, 1.3, GuidanceParams{});
    EXPECT_DOUBLE_EQ(d[0], 1.3);
    EXPECT_DOUBLE_EQ(d[1], 0.0);
    EXPECT_DOUBLE_EQ(d[2], 0.0);
    EXPECT_DOUBLE_EQ(d[3], 0.0);
}

TEST(StateDerivative, NorthHeading) {
    const auto d = state_derivative(AttackerState{0, 0, kPi / 2, 0}, 0.0, 1.0, GuidanceParams{});
    EXPECT_NEAR(d[0], 0.0, 1e-16);
    EXPECT_DOUBLE_EQ(d[1], 1.0);
}

TEST(StateDerivative, AtBoundDecays) {
    GuidanceParams p;
    const auto d = state_derivative(AttackerState{0, 0, 0, p.a_max}, 50.0, 1.0, p);
    EXPECT_DOUBLE_EQ(d[3], -p.p1 * p.a_max);
    EXPECT_DOUBLE_EQ(d[2], p.a_max);
}

TEST(Rk4Step, LinearMotionIsExact) {
    const auto s = rk4_step({0, 0, 0, 0}, 0.01, 0.0, 1.0, GuidanceParams{});
    EXPECT_DOUBLE_EQ(s.x, 0.01);
    EXPECT_EQ(s.y, 0.0);
    EXPECT_EQ(s.gamma, 0.0);
    EXPECT_EQ(s.a_A, 0.0);
}

TEST(Rk4Step, ConstantTurnRate) {
    // a_c = p1 a_A / (1 - a_A^2) keeps a_A fixed at 0.1.
    GuidanceParams p;
    const double a = 0.1;
    const double a_c = p.p1 * a / (1 - a * a);
    for (double dt : {1e-3, 0.05, 0.3}) {
        const auto s = rk4_step({0, 0, 0, a}, dt, a_c, 1.0, p);
        EXPECT_NEAR(s.gamma, a * dt, 1e-15);
        EXPECT_NEAR(s.a_A, a, 1e-15);
    }
}

TEST(Rk4Step, ObservedOrder) { EXPECT_GE(rk4_observed_order(), 3.5); }

TEST(Rk4Step, StiffCommandsAreSubstepped) {
    GuidanceParams p;
    EXPECT_EQ(rk4_substeps(1e-3, 1.0, p), 1u);
    EXPECT_GT(rk4_substeps(1e-3, 1e4, p), 1u);
    const auto s = rk4_step({0, 0, 0, 0.99}, 1e-3, 1e5, 1.0, p);
    EXPECT_LT(std::abs(s.a_A), p.a_max);
    EXPECT_TRUE(std::isfinite(s.a_A));
}

TEST(HeldNumeratorStep, StaysInsideBoundForAnyNumerator) {
    GuidanceParams p;
    const double edge = saturation_layer_edge(p);
    EXPECT_LT(edge, p.a_max);
    EXPECT_NEAR(1.0 - std::pow(edge / p.a_max, p.sat_n), p.sat_denom_floor, 1e-15);
    for (double n : {-1e6, -50.0, -1.0, 0.0, 1.0, 50.0, 1e6}) {
        AttackerState s{0, 0, 0, 0.5};
        for (int k = 0; k < 2000; ++k) {
            s = rk4_step_held_numerator(s, 1e-3, n, 1.0, p);
            ASSERT_LE(std::abs(s.a_A), edge);
        }
    }
}

TEST(HeldNumeratorStep, MatchesFrozenCommandAwayFromBound) {
    GuidanceParams p;
    const AttackerState s{1, 2, 0.3, 0.2};
    const double a_c = 0.4;
    const double numerator = a_c * saturation_divisor(s.a_A, p);
    const auto a = rk4_step_held_numerator(s, 1e-3, numerator, 1.0, p);
    const auto b = rk4_step(s, 1e-3, a_c, 1.0, p);
    EXPECT_NEAR(a.x, b.x, 1e-12);
    EXPECT_NEAR(a.gamma, b.gamma, 1e-9);
    EXPECT_NEAR(a.a_A, b.a_A, 1e-6);
}

TEST(RunScenario, StraightLineIntercept) {
    Scenario scn;
    scn.attacker_init = {0, 0, 0, 0};
    scn.target = {5, 0};
    const auto log = run_scenario(scn);
    EXPECT_EQ(log.outcome.kind, OutcomeKind::Intercepted);
    EXPECT_NEAR(log.outcome.t, 5.0 - scn.capture_radius, 2 * scn.dt);
    EXPECT_LE(log.rows.back().r_AT, scn.capture_radius);
}

TEST(RunScenario, InvalidStart) {
    Scenario scn = ezguide::testing::bundled("paper_scenario_1");
    scn.attacker_init = {3.0, 1.0, kPi / 2, 0.0};
    const auto log = run_scenario(scn);
    EXPECT_EQ(log.outcome.kind, OutcomeKind::InvalidStart);
    EXPECT_EQ(log.outcome.defender_id, 1);
    EXPECT_TRUE(log.rows.empty());
}

TEST(RunScenario, Timeout) {
    Scenario scn;
    scn.attacker_init = {0, 0, 0, 0};
    scn.target = {50, 0};
    scn.t_max = 2.0;
    const auto log = run_scenario(scn);
    EXPECT_EQ(log.outcome.kind, OutcomeKind::Timeout);
    EXPECT_NEAR(log.outcome.t, 2.0, 1e-9);
}

TEST(RunScenario, ViolationWhenSafetyIsOff) {
    // A huge switch offset keeps alpha at 0, so the attacker flies through the zone.
    Scenario scn;
    scn.attacker_init = {0, 0, 0, 0};
    scn.target = {10, 0};
    scn.defenders = {{{5.0, 0.5}, 1.5, 0.5, 0.7, 4}};
    scn.params.eps_alpha = -100.0;
    const auto log = run_scenario(scn);
    EXPECT_EQ(log.outcome.kind, OutcomeKind::EZViolation);
    EXPECT_EQ(log.outcome.defender_id, 4);
    EXPECT_LE(log.rows.back().defenders[0].b, -scn.params.eps_margin + 1e-12);
}

TEST(RunScenario, RowsUniformAndSpeedConserved) {
    const Scenario scn = ezguide::testing::bundled("paper_scenario_2");
    const auto log = run_scenario(scn);
    ASSERT_GT(log.rows.size(), 2u);
    for (std::size_t k = 0; k < log.rows.size(); ++k) {
        ASSERT_EQ(log.rows[k].t, static_cast<double>(k) * scn.dt);
        const auto d = state_derivative(log.rows[k].state, 0.0, scn.v_A, scn.params);
        ASSERT_NEAR(std::hypot(d[0], d[1]), scn.v_A, 1e-15);
    }
}

TEST(RunScenario, Deterministic) {
    const Scenario scn = ezguide::testing::bundled("paper_scenario_1");
    const auto a = run_scenario(scn);
    const auto b = run_scenario(scn);
    ASSERT_EQ(a.rows.size(), b.rows.size());
    for (std::size_t k = 0; k < a.rows.size(); ++k) {
        ASSERT_EQ(a.rows[k].state.x, b.rows[k].state.x);
        ASSERT_EQ(a.rows[k].state.y, b.rows[k].state.y);
        ASSERT_EQ(a.rows[k].state.gamma, b.rows[k].state.gamma);
        ASSERT_EQ(a.rows[k].state.a_A, b.rows[k].state.a_A);
        ASSERT_EQ(a.rows[k].guidance.a_c, b.rows[k].guidance.a_c);
    }
    EXPECT_EQ(a.summary.min_b, b.summary.min_b);
}

TEST(RunScenario, RecordRowsOffKeepsSummary) {
    const Scenario scn = ezguide::testing::bundled("paper_scenario_2");
    const auto a = run_scenario(scn);
    const auto b = run_scenario(scn, {.record_rows = false});
    EXPECT_TRUE(b.rows.empty());
    EXPECT_EQ(a.summary.t_f, b.summary.t_f);
    EXPECT_EQ(a.summary.min_b, b.summary.min_b);
    EXPECT_EQ(a.summary.mean_abs_z_tail, b.summary.mean_abs_z_tail);
}

TEST(RunScenario, ScenarioOneRegression) {
    const Scenario scn = ezguide::testing::bundled("paper_scenario_1");
    const auto log = run_scenario(scn);
    // Frozen from the first run of this implementation.
    EXPECT_EQ(log.outcome.kind, OutcomeKind::Intercepted);
    EXPECT_NEAR(log.outcome.t, 15.267, 1.5e-3);
    EXPECT_NEAR(log.summary.min_b, -0.1186, 5e-4);
    EXPECT_GT(log.summary.min_clearance, 0.0);
    EXPECT_LE(log.rows.back().r_AT, scn.capture_radius);
}

TEST(Scenario, ValidateErrors) {
    Scenario scn;
    scn.dt = 0.0;
    EXPECT_THROW(scn.validate(), ParameterError);
    scn = {};
    scn.t_max = scn.dt / 2;
    EXPECT_THROW(scn.validate(), ParameterError);
    scn = {};
    scn.capture_radius = 0.0;
    EXPECT_THROW(scn.validate(), ParameterError);
    scn = {};
    scn.v_A = -1.0;
    EXPECT_THROW(scn.validate(), ParameterError);
    scn = {};
    scn.attacker_init.a_A = 1.0;
    EXPECT_THROW(scn.validate(), ParameterError);
    scn = {};
    scn.defenders = {{{0, 0}, 1.5, 0.5, 1.2, 1}};
    EXPECT_THROW(scn.validate(), ParameterError);
}
