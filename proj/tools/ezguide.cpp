// ezguide: run, sweep, check and plot engagement scenarios.
//
// Exit codes: 0 intercepted (or all checks / sweep clean), 2 zone violation,
// 3 timeout, 4 invalid start, 1 usage or I/O error.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ezguide/ezguide.hpp"

#ifndef EZGUIDE_SCENARIO_DIR
#define EZGUIDE_SCENARIO_DIR "scenarios"
#endif

namespace fs = std::filesystem;
using namespace ezguide;

namespace {

constexpr int kExitError = 1;

int exit_code(OutcomeKind k) {
    switch (k) {
        case OutcomeKind::Intercepted: return 0;
        case OutcomeKind::EZViolation: return 2;
        case OutcomeKind::Timeout: return 3;
        case OutcomeKind::InvalidStart: return 4;
    }
    return kExitError;
}

std::string default_out_dir() {
    if (const char* env = std::getenv("EZGUIDE_OUT_DIR"); env && *env) return env;
    return "ezguide_out";
}

// A path that exists is used as is; otherwise a bundled scenario name.
fs::path resolve_scenario(const std::string& arg) {
    if (fs::exists(arg)) return arg;
    for (const fs::path& p : {fs::path(EZGUIDE_SCENARIO_DIR) / arg, fs::path(EZGUIDE_SCENARIO_DIR) / (arg + ".scn")})
        if (fs::exists(p)) return p;
    throw Error("scenario file not found: '" + arg + "'");
}

struct ScenarioArgs {
    std::string path;
    std::vector<std::string> overrides;
    double dt{0.0};
    double t_max{0.0};

    void add_to(CLI::App* cmd) {
        cmd->add_option("scenario", path, "Scenario file, or the name of a bundled scenario")->required();
        cmd->add_option("--set", overrides, "Override a field, e.g. params.K_s=0.5 or defender.2.mu=0.6");
        cmd->add_option("--dt", dt, "Integration step (s)");
        cmd->add_option("--t-max", t_max, "Time limit (s)");
    }

    Scenario load() const {
        std::vector<std::string> all = overrides;
        if (dt != 0.0) all.push_back("sim.dt=" + format_double(dt));
        if (t_max != 0.0) all.push_back("sim.t_max=" + format_double(t_max));
        return load_scenario(resolve_scenario(path), all);
    }
};

void print_summary(const TrajectoryLog& log) {
    const RunSummary& s = log.summary;
    std::cout << "outcome " << to_string(log.outcome.kind) << " at t=" << format_fixed(log.outcome.t, 3) << " s";
    if (log.outcome.defender_id >= 0) std::cout << " (defender " << log.outcome.defender_id << ")";
    std::cout << "\nmin b " << format_fixed(s.min_b, 4) << " m, min clearance " << format_fixed(s.min_clearance, 4)
              << " m, max |a_A| " << format_fixed(s.max_abs_a, 6) << " m/s^2\n";
    if (s.floored_steps > 0)
        std::cerr << "warning: saturation divisor floored on " << s.floored_steps << " step(s)\n";
    if (s.degenerate_steps > 0)
        std::cerr << "warning: singular safety law replaced by the fallback turn on " << s.degenerate_steps
                  << " step(s)\n";
}

int cmd_run(const ScenarioArgs& args, const std::string& out, bool plots) {
    const Scenario scn = args.load();
    const TrajectoryLog log = run_scenario(scn);
    fs::create_directories(out);
    if (!log.rows.empty()) write_trajectory_csv(log, fs::path(out) / "trajectory.csv");
    write_json(summary_json(scn, log), fs::path(out) / "summary.json");
    if (plots && !log.rows.empty()) write_plots(scn, log, out);
    print_summary(log);
    return exit_code(log.outcome.kind);
}

int cmd_plot(const ScenarioArgs& args, const std::string& out, const std::vector<std::string>& kinds) {
    const Scenario scn = args.load();
    const TrajectoryLog log = run_scenario(scn);
    if (log.rows.empty()) throw Error("nothing to plot: the start is inside an engagement zone");
    std::vector<PlotKind> selected;
    for (const auto& k : kinds) {
        const auto kind = parse_plot_kind(k);
        if (!kind) throw Error("unknown plot kind '" + k + "'");
        selected.push_back(*kind);
    }
    if (selected.empty()) selected.assign(kAllPlotKinds.begin(), kAllPlotKinds.end());
    fs::create_directories(out);
    for (PlotKind k : selected) {
        const fs::path path = fs::path(out) / (std::string(to_string(k)) + ".svg");
        std::ofstream f(path, std::ios::binary);
        if (!(f << emit_plot(scn, log, k))) throw Error("cannot write '" + path.string() + "'");
        std::cout << path.string() << '\n';
    }
    return 0;
}

struct SweepArgs {
    std::string sampler{"ring"};
    std::size_t count{100};
    double r_min{6.0};
    double r_max{9.0};
    std::vector<double> grid;
    std::string heading{"target"};
    bool allow_invalid{false};
    std::uint64_t seed{0};
    bool seed_given{false};
    unsigned jobs{1};
};

int cmd_sweep(const ScenarioArgs& args, const SweepArgs& sw, const std::string& out) {
    Scenario scn = args.load();
    if (sw.seed_given) scn.seed = sw.seed;
    const HeadingMode heading = sw.heading == "uniform" ? HeadingMode::Uniform : HeadingMode::Target;

    Sampler sampler = SingletonSampler{};
    if (sw.sampler == "ring") {
        sampler = RingSampler{sw.r_min, sw.r_max, sw.count, heading, !sw.allow_invalid};
    } else if (sw.sampler == "grid") {
        if (sw.grid.size() != 6) throw Error("--grid expects x_min,x_max,y_min,y_max,nx,ny");
        sampler = GridSampler{sw.grid[0], sw.grid[1], sw.grid[2], sw.grid[3],
                              static_cast<std::size_t>(sw.grid[4]), static_cast<std::size_t>(sw.grid[5]), heading};
    }

    const SweepReport rep = monte_carlo_sweep(scn, sampler, sw.jobs);
    fs::create_directories(out);
    write_json(sweep_report_json(rep, scn.seed), fs::path(out) / "sweep_report.json");

    std::cout << "runs " << rep.total << ", valid " << rep.valid << ", intercepted " << rep.intercepted
              << ", violations " << rep.violations << ", timeouts " << rep.timeouts << ", invalid starts "
              << rep.invalid_starts << ", errors " << rep.errors << '\n';
    if (rep.empty_valid) {
        std::cout << "success rate undefined: no valid starts\n";
    } else {
        std::cout << "success rate " << format_fixed(rep.success_rate, 4) << ", violation rate "
                  << format_fixed(rep.violation_rate, 4) << '\n';
    }
    return rep.violations == 0 && rep.errors == 0 ? 0 : 2;
}

int cmd_check(std::size_t trials, std::uint64_t seed) {
    bool ok = true;
    for (const CheckResult& c : run_checks(trials, seed)) {
        ok = ok && c.passed;
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": measured " << format_double(c.measured)
                  << ", tolerance " << format_double(c.tolerance) << " (" << c.detail << ")\n";
    }
    return ok ? 0 : kExitError;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Engagement-zone-aware intercept guidance simulator"};
    app.require_subcommand(1);

    std::string out_dir = default_out_dir();

    ScenarioArgs run_args;
    bool no_plots = false;
    auto* run = app.add_subcommand("run", "Simulate one scenario and write CSV, JSON and SVG output");
    run_args.add_to(run);
    run->add_option("--out", out_dir, "Output directory (default $EZGUIDE_OUT_DIR or ./ezguide_out)");
    run->add_flag("--no-plots", no_plots, "Skip the SVG figures");

    ScenarioArgs sweep_args;
    SweepArgs sw;
    auto* sweep = app.add_subcommand("sweep", "Monte-Carlo sweep over start positions");
    sweep_args.add_to(sweep);
    sweep->add_option("--out", out_dir, "Output directory");
    sweep->add_option("--sampler", sw.sampler, "ring, grid or single")
        ->check(CLI::IsMember({"ring", "grid", "single"}));
    sweep->add_option("--count", sw.count, "Ring sampler: number of starts");
    sweep->add_option("--r-min", sw.r_min, "Ring sampler: inner radius around the target (m)");
    sweep->add_option("--r-max", sw.r_max, "Ring sampler: outer radius around the target (m)");
    sweep->add_option("--grid", sw.grid, "Grid sampler: x_min,x_max,y_min,y_max,nx,ny")->delimiter(',');
    sweep->add_option("--heading", sw.heading, "Start heading: target or uniform")
        ->check(CLI::IsMember({"target", "uniform"}));
    sweep->add_flag("--allow-invalid", sw.allow_invalid, "Ring sampler: keep starts inside a zone");
    auto* seed_opt = sweep->add_option("--seed", sw.seed, "Sampling seed (default: the scenario's)");
    sweep->add_option("--jobs", sw.jobs, "Worker threads (0 = all cores)");

    std::size_t trials = 1000;
    std::uint64_t check_seed = 1;
    auto* check = app.add_subcommand("check", "Run the built-in numerical self-checks");
    check->add_option("--trials", trials, "Monte-Carlo size (random-walk trials; 10x for sampled checks)");
    check->add_option("--seed", check_seed, "Random seed");

    ScenarioArgs plot_args;
    std::vector<std::string> kinds;
    auto* plot = app.add_subcommand("plot", "Simulate a scenario and write selected SVG figures");
    plot_args.add_to(plot);
    plot->add_option("--out", out_dir, "Output directory");
    plot->add_option("--kind", kinds, "trajectory, range_bearing, safety or accel (repeatable)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitError;
    }

    try {
        if (*run) return cmd_run(run_args, out_dir, !no_plots);
        if (*sweep) {
            sw.seed_given = seed_opt->count() > 0;
            return cmd_sweep(sweep_args, sw, out_dir);
        }
        if (*check) return cmd_check(trials, check_seed);
        if (*plot) return cmd_plot(plot_args, out_dir, kinds);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
