// pledge: run, plan, replay, compare, and batch-evaluate scenarios.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pledge/error.hpp"
#include "pledge/pddl.hpp"
#include "pledge/planner.hpp"
#include "pledge/report.hpp"
#include "pledge/scenario.hpp"
#include "pledge/sim.hpp"

namespace fs = std::filesystem;
using namespace pledge;

namespace {

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot read " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    out << text;
}

bool parse_switch(const std::string& value) {
    if (value == "on") return true;
    if (value == "off") return false;
    throw ConfigError("expected 'on' or 'off', got '" + value + "'");
}

/// Accepts an events.jsonl file or a run directory holding one.
fs::path event_log_path(const fs::path& p) {
    return fs::is_directory(p) ? p / "events.jsonl" : p;
}

int cmd_run(const std::string& scenario_path, std::optional<std::uint64_t> seed, const std::string& promises,
            std::optional<Time> lookahead, const std::string& out_dir) {
    Scenario sc = load_scenario(scenario_path);
    RunOptions opts{seed, std::nullopt, lookahead};
    if (!promises.empty()) {
        opts.promises = parse_switch(promises);
    }
    apply_options(sc, opts);
    const auto result = run(sc);
    const auto report = build_report(result.events);
    fs::create_directories(out_dir);
    save_events(fs::path(out_dir) / "events.jsonl", result.events);
    write_text(fs::path(out_dir) / "report.txt", format_report(report));
    write_text(fs::path(out_dir) / "gantt.txt", format_gantt(report));
    std::cout << format_report(report);
    double slowest = 0.0;
    for (double s : result.planner_seconds) {
        slowest = std::max(slowest, s);
    }
    std::cout << "\nplanner calls " << result.planner_seconds.size() << ", slowest " << slowest * 1000.0 << " ms\n";
    std::cout << "wrote " << out_dir << "/{events.jsonl,report.txt,gantt.txt}\n";
    return result.objective_reached ? 0 : 2;
}

int cmd_plan(const std::string& domain_path, const std::string& problem_path, const std::string& mode) {
    const Domain domain = parse_domain(slurp(domain_path), domain_path);
    const Problem problem = parse_problem(slurp(problem_path), domain, problem_path);
    const Signature sig = make_signature(domain, problem.objects);
    AtomSet init = sig.to_set(problem.init);
    const auto actions = ground_actions(domain, sig, &init);
    PlanningTask task;
    task.actions = actions;
    task.init = init;
    for (const auto& l : problem.objective) {
        task.objective.push_back(sig.lit(l));
    }
    for (const auto& til : problem.tils) {
        task.tils.push_back({til.at, sig.lit(til.literal)});
    }
    PlannerConfig cfg;
    cfg.mode = mode == "greedy" ? SearchMode::greedy : SearchMode::uniform_cost;
    const auto result = plan(task, cfg);
    if (result.status != PlanStatus::solved) {
        std::cerr << "no plan: " << to_string(result.status) << " (" << result.expanded << " nodes expanded)\n";
        return 1;
    }
    for (const auto& step : result.plan.steps) {
        std::cout << step.start << " " << step.action.duration << " " << step.action.label() << "\n";
    }
    std::cout << "; makespan " << makespan(result.plan) << ", expanded " << result.expanded << "\n";
    return 0;
}

int cmd_replay(const std::string& path, bool gantt) {
    const auto events = load_events(event_log_path(path));
    const auto report = build_report(events);
    std::cout << (gantt ? format_gantt(report) : format_report(report));
    return 0;
}

int cmd_compare(const std::string& a, const std::string& b) {
    const auto ra = build_report(load_events(event_log_path(a)));
    const auto rb = build_report(load_events(event_log_path(b)));
    std::cout << format_comparison(compare(ra, rb));
    return 0;
}

int cmd_batch(const std::string& scenario_path, int seeds) {
    const Scenario base = load_scenario(scenario_path);
    std::vector<double> off;
    std::vector<double> on;
    std::cout << "seed   baseline   promises\n";
    for (int i = 0; i < seeds; ++i) {
        std::uint64_t seed = base.seed + static_cast<std::uint64_t>(i);
        Time m[2] = {-1, -1};
        for (int mode = 0; mode < 2; ++mode) {
            Scenario sc = base;
            apply_options(sc, RunOptions{seed, mode == 1, std::nullopt});
            const auto result = run(sc);
            if (!result.objective_reached) {
                throw Error("seed " + std::to_string(seed) + " did not reach the objective");
            }
            m[mode] = result.end_time;
        }
        off.push_back(static_cast<double>(m[0]));
        on.push_back(static_cast<double>(m[1]));
        std::printf("%-6llu %-10lld %-10lld\n", static_cast<unsigned long long>(seed), static_cast<long long>(m[0]),
                    static_cast<long long>(m[1]));
    }
    const auto s_off = sample_stats(off);
    const auto s_on = sample_stats(on);
    std::printf("\nbaseline  %.1f +- %.2f ticks\npromises  %.1f +- %.2f ticks\nimprovement %.2f%%\n", s_off.mean,
                s_off.stddev, s_on.mean, s_on.stddev, 100.0 * (s_off.mean - s_on.mean) / s_off.mean);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Promise-based multi-agent goal reasoning simulator"};
    app.require_subcommand(1);

    auto* run_cmd = app.add_subcommand("run", "Simulate a scenario and write events.jsonl, report.txt, gantt.txt");
    std::string scenario;
    std::optional<std::uint64_t> seed;
    std::string promises;
    std::optional<Time> lookahead;
    std::string out_dir = "out";
    run_cmd->add_option("scenario", scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("--seed", seed, "Random seed");
    run_cmd->add_option("--promises", promises, "on|off")->check(CLI::IsMember({"on", "off"}));
    run_cmd->add_option("--lookahead", lookahead, "Lookahead ticks for every goal operator");
    run_cmd->add_option("--out", out_dir, "Output directory");

    auto* plan_cmd = app.add_subcommand("plan", "Plan a PDDL problem with the built-in temporal planner");
    std::string domain_path;
    std::string problem_path;
    std::string mode = "uniform-cost";
    plan_cmd->add_option("domain", domain_path)->required()->check(CLI::ExistingFile);
    plan_cmd->add_option("problem", problem_path)->required()->check(CLI::ExistingFile);
    plan_cmd->add_option("--mode", mode, "uniform-cost|greedy")->check(CLI::IsMember({"uniform-cost", "greedy"}));

    auto* replay_cmd = app.add_subcommand("replay", "Rebuild the report from an event log");
    std::string log_path;
    bool gantt = false;
    replay_cmd->add_option("eventlog", log_path, "events.jsonl or run directory")->required()->check(CLI::ExistingPath);
    replay_cmd->add_flag("--gantt", gantt, "Print the timeline instead of the report");

    auto* compare_cmd = app.add_subcommand("compare", "Compare a baseline run with a promise run");
    std::string log_a;
    std::string log_b;
    compare_cmd->add_option("a", log_a)->required()->check(CLI::ExistingPath);
    compare_cmd->add_option("b", log_b)->required()->check(CLI::ExistingPath);

    auto* batch_cmd = app.add_subcommand("batch", "Run several seeds with and without promises");
    int seeds = 5;
    batch_cmd->add_option("scenario", scenario)->required()->check(CLI::ExistingFile);
    batch_cmd->add_option("--seeds", seeds, "Number of consecutive seeds")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);
    try {
        if (*run_cmd) return cmd_run(scenario, seed, promises, lookahead, out_dir);
        if (*plan_cmd) return cmd_plan(domain_path, problem_path, mode);
        if (*replay_cmd) return cmd_replay(log_path, gantt);
        if (*compare_cmd) return cmd_compare(log_a, log_b);
        if (*batch_cmd) return cmd_batch(scenario, seeds);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
