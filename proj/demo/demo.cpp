// Builds a two-defender scenario in code, runs it and prints a short report.

#include <iostream>

#include "ezguide/ezguide.hpp"

int main() {
    using namespace ezguide;

    Scenario scn;
    scn.attacker_init = {-7.0, 0.0, 0.0, 0.0};
    scn.target = {6.0, 0.0};
    scn.defenders = {{{-1.0, 2.8}, 1.5, 0.5, 0.7, 1}, {{3.0, -2.2}, 1.5, 0.5, 0.7, 2}};
    scn.attacker_init.gamma = heading_to(scn.attacker_init, scn.target);

    const TrajectoryLog log = run_scenario(scn);
    std::cout << "outcome " << to_string(log.outcome.kind) << " at t = " << format_fixed(log.outcome.t, 3) << " s\n"
              << "min b " << format_fixed(log.summary.min_b, 4) << " m, min clearance "
              << format_fixed(log.summary.min_clearance, 4) << " m, max |a_A| "
              << format_fixed(log.summary.max_abs_a, 4) << " m/s^2\n";
    for (const auto& d : defender_stats(log, scn.params.eps_margin))
        std::cout << "  D" << d.id << ": closest approach " << format_fixed(d.min_r, 3) << " m\n";

    // The same scenario as a file, ready for `ezguide run`.
    std::cout << "\n" << serialize_scenario(scn);
    return log.outcome.kind == OutcomeKind::Intercepted ? 0 : 1;
}
