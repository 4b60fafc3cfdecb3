#include <gtest/gtest.h>

#include <numeric>

#include "test_support.hpp"

using namespace ezguide;
using ezguide::testing::bundled;

TEST(Sweep, SingletonMatchesRun) {
    const Scenario scn = bundled("paper_scenario_1");
    const SweepReport rep = monte_carlo_sweep(scn, SingletonSampler{});
    const TrajectoryLog log = run_scenario(scn);
    ASSERT_EQ(rep.total, 1u);
    EXPECT_EQ(rep.runs[0].outcome.kind, log.outcome.kind);
    EXPECT_EQ(rep.runs[0].outcome.t, log.outcome.t);
    EXPECT_EQ(rep.runs[0].summary.min_b, log.summary.min_b);
    EXPECT_EQ(rep.intercepted, 1u);
    EXPECT_EQ(rep.success_rate, 1.0);
}

TEST(Sweep, AllStartsInsideZones) {
    Scenario scn = bundled("paper_scenario_1");
    std::vector<AttackerState> starts;
    for (const auto& d : scn.defenders) starts.push_back({d.origin.x + 0.3, d.origin.y, 0.0, 0.0});
    const SweepReport rep = monte_carlo_sweep(scn, starts);
    EXPECT_EQ(rep.invalid_starts, 3u);
    EXPECT_EQ(rep.valid, 0u);
    EXPECT_TRUE(rep.empty_valid);
    EXPECT_EQ(rep.success_rate, 0.0);
}

TEST(Sweep, RingStartsAreValidAndOnTheRing) {
    const Scenario scn = bundled("paper_scenario_1");
    const auto starts = sample_starts(scn, RingSampler{});
    ASSERT_EQ(starts.size(), 100u);
    Scenario probe = scn;
    for (const auto& s : starts) {
        const double r = (s.position() - scn.target).norm();
        EXPECT_GE(r, 6.0 - 1e-12);
        EXPECT_LE(r, 9.0 + 1e-12);
        probe.attacker_init = s;
        EXPECT_EQ(start_violation(probe), -1);
        EXPECT_NEAR(s.gamma, heading_to(s, scn.target), 1e-15);
    }
}

TEST(Sweep, GridSamplerIncludesCorners) {
    const Scenario scn = bundled("paper_scenario_1");
    const auto starts = sample_starts(scn, GridSampler{-8, 8, -4, 4, 3, 2, HeadingMode::Uniform});
    ASSERT_EQ(starts.size(), 6u);
    EXPECT_EQ(starts.front().x, -8.0);
    EXPECT_EQ(starts.front().y, -4.0);
    EXPECT_EQ(starts.back().x, 8.0);
    EXPECT_EQ(starts.back().y, 4.0);
    EXPECT_EQ(starts[1].x, 0.0);
}

TEST(Sweep, DeterministicAndIndependentOfJobs) {
    Scenario scn = bundled("paper_scenario_1");
    scn.t_max = 6.0;
    const RingSampler ring{6, 9, 12, HeadingMode::Uniform, true};
    const SweepReport a = monte_carlo_sweep(scn, ring, 1);
    const SweepReport b = monte_carlo_sweep(scn, ring, 3);
    ASSERT_EQ(a.runs.size(), b.runs.size());
    for (std::size_t i = 0; i < a.runs.size(); ++i) {
        EXPECT_EQ(a.runs[i].start, b.runs[i].start);
        EXPECT_EQ(a.runs[i].outcome.kind, b.runs[i].outcome.kind);
        EXPECT_EQ(a.runs[i].summary.t_f, b.runs[i].summary.t_f);
        EXPECT_EQ(a.runs[i].summary.min_b, b.runs[i].summary.min_b);
    }
    EXPECT_EQ(a.min_b_histogram.counts, b.min_b_histogram.counts);
}

TEST(Sweep, SeedChangesStarts) {
    Scenario a = bundled("paper_scenario_1");
    Scenario b = a;
    b.seed = a.seed + 1;
    const RingSampler ring{6, 9, 5, HeadingMode::Target, true};
    EXPECT_NE(sample_starts(a, ring), sample_starts(b, ring));
    EXPECT_EQ(sample_starts(a, ring), sample_starts(a, ring));
}

TEST(Sweep, RingRegression) {
    const Scenario scn = bundled("paper_scenario_1");
    const SweepReport rep = monte_carlo_sweep(scn, RingSampler{}, 0);
    // Frozen from the first run of this implementation (seed 7, 100 starts).
    EXPECT_EQ(rep.total, 100u);
    EXPECT_EQ(rep.valid, 100u);
    EXPECT_EQ(rep.intercepted, 99u);
    EXPECT_EQ(rep.violations, 1u);
    EXPECT_EQ(rep.errors, 0u);
    const auto counted = std::accumulate(rep.min_b_histogram.counts.begin(), rep.min_b_histogram.counts.end(),
                                         std::size_t{0});
    EXPECT_EQ(counted, rep.valid);
}

TEST(Histogram, Basics) {
    const Histogram h = make_histogram({0.0, 0.5, 1.0, 1.0}, 2);
    EXPECT_EQ(h.lo, 0.0);
    EXPECT_EQ(h.hi, 1.0);
    EXPECT_EQ(h.counts, (std::vector<std::size_t>{1, 3}));
    const Histogram single = make_histogram({2.0}, 4);
    EXPECT_EQ(single.lo, 1.5);
    EXPECT_EQ(single.hi, 2.5);
    EXPECT_EQ(std::accumulate(single.counts.begin(), single.counts.end(), std::size_t{0}), 1u);
}

class RingSweep : public ::testing::Test {
protected:
    static void SetUpTestSuite() {
        const Scenario scn = bundled("paper_scenario_1");
        rep_ = new SweepReport(
            monte_carlo_sweep(scn, RingSampler{6.0, 9.0, 200, HeadingMode::Target, true}, 1));
    }
    static void TearDownTestSuite() { delete rep_; }
    static SweepReport* rep_;
};

SweepReport* RingSweep::rep_ = nullptr;

TEST_F(RingSweep, ForwardInvarianceOfSafeSet) {
    EXPECT_EQ(rep_->violations, 0u);
    EXPECT_EQ(rep_->h_negative_crossings, 0u) << "runs where h went from > 0 to < 0 with |a_A| < a_max";
}

TEST_F(RingSweep, TrackingErrorVanishesInInterceptedRuns) {
    std::size_t checked = 0;
    for (const auto& r : rep_->runs) {
        if (r.outcome.kind != OutcomeKind::Intercepted) continue;
        ++checked;
        EXPECT_LT(r.summary.mean_abs_z_tail, 0.05) << "run " << r.index;
    }
    EXPECT_GT(checked, 150u);
}
