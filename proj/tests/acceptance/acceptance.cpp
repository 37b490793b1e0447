// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. `--update-fixtures` rewrites the golden
// event orders instead of comparing against them.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "instances.hpp"
#include "oracles.hpp"
#include "pledge/planner.hpp"
#include "pledge/promise.hpp"
#include "pledge/report.hpp"
#include "pledge/sim.hpp"

using namespace pledge;

namespace {

const std::string kRoot = PLEDGE_SOURCE_DIR;

// Pinned tolerances.
constexpr double kMinImprovement = 3.0;   // percent
constexpr double kSpeedupBudget = 30.0;   // seconds of wall clock
constexpr double kPlannerBudget = 1.0;    // seconds per planner call
constexpr double kOracleBudget = 5.0;     // seconds for all From/Until instances
constexpr int kSeeds = 5;
constexpr int kOracleInstances = 10000;
constexpr int kFuzzInstances = 200;
constexpr int kEnumerationDepth = 4;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

Scenario load(const std::string& name) {
    return load_scenario(kRoot + "/scenarios/" + name + ".json");
}

struct Verdict {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int n, const std::string& title, const Verdict& v) {
    std::cout << "criterion " << n << " " << (v.pass ? "PASS" : "FAIL") << ": " << title << " (" << v.detail << ")"
              << std::endl;
    failures += v.pass ? 0 : 1;
}

Verdict guarded(const std::function<Verdict()>& body) {
    try {
        return body();
    } catch (const std::exception& e) {
        return {false, std::string("exception: ") + e.what()};
    }
}

std::string fixed(double v, int digits) {
    std::ostringstream out;
    out.precision(digits);
    out << std::fixed << v;
    return out.str();
}

struct SpeedupRuns {
    std::vector<Scenario> scenarios;
    std::vector<RunResult> baseline;
    std::vector<RunResult> promises;
    double wall = 0.0;
};

SpeedupRuns speedup_runs() {
    SpeedupRuns runs;
    const Scenario base = load("xenonite-3r-5c");
    const auto start = Clock::now();
    for (int i = 0; i < kSeeds; ++i) {
        Scenario s = base;
        s.seed = base.seed + static_cast<std::uint64_t>(i);
        Scenario off = s;
        off.promises = false;
        runs.promises.push_back(run(s));
        runs.baseline.push_back(run(off));
        runs.scenarios.push_back(s);
    }
    runs.wall = seconds_since(start);
    return runs;
}

Verdict criterion_speedup(const SpeedupRuns& runs) {
    std::vector<double> on;
    std::vector<double> off;
    bool every_seed = true;
    std::string per_seed;
    for (int i = 0; i < kSeeds; ++i) {
        const auto& p = runs.promises[static_cast<std::size_t>(i)];
        const auto& b = runs.baseline[static_cast<std::size_t>(i)];
        if (!p.objective_reached || !b.objective_reached) {
            return {false, "a run missed the objective"};
        }
        on.push_back(static_cast<double>(p.end_time));
        off.push_back(static_cast<double>(b.end_time));
        every_seed &= p.end_time < b.end_time;
        per_seed += (i ? " " : "") + std::to_string(b.end_time) + "->" + std::to_string(p.end_time);
    }
    const auto m_on = sample_stats(on);
    const auto m_off = sample_stats(off);
    const double improvement = 100.0 * (m_off.mean - m_on.mean) / m_off.mean;
    const bool pass = every_seed && improvement >= kMinImprovement && runs.wall < kSpeedupBudget;
    return {pass, "makespans " + per_seed + "; mean " + fixed(m_off.mean, 1) + " -> " + fixed(m_on.mean, 1) +
                      " ticks, improvement " + fixed(improvement, 2) + "% (need >= " + fixed(kMinImprovement, 1) +
                      "%), wall " + fixed(runs.wall, 2) + " s (need < " + fixed(kSpeedupBudget, 0) + " s)"};
}

Verdict criterion_planner(const SpeedupRuns& runs) {
    if (runs.scenarios.front().planner.mode != SearchMode::greedy) {
        return {false, "scenario does not use the greedy planner"};
    }
    double slowest = 0.0;
    std::size_t calls = 0;
    for (const auto* group : {&runs.baseline, &runs.promises}) {
        for (const auto& r : *group) {
            for (double s : r.planner_seconds) {
                slowest = std::max(slowest, s);
                ++calls;
            }
        }
    }
    return {calls > 0 && slowest < kPlannerBudget,
            std::to_string(calls) + " calls, slowest " + fixed(slowest * 1000.0, 3) + " ms (need < " +
                fixed(kPlannerBudget, 1) + " s)"};
}

std::string fixture_path(const std::string& name) {
    return kRoot + "/tests/fixtures/" + name + ".order";
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) {
        if (!line.empty()) {
            lines.push_back(line);
        }
    }
    return lines;
}

Verdict criterion_scenarios(bool update, std::vector<std::pair<Scenario, RunResult>>& traces) {
    std::string detail;
    bool pass = true;
    for (const auto& name : {"s1", "s2", "s3", "s4"}) {
        Scenario s = load(name);
        auto result = run(s);
        const auto order = oracle::event_order(result.events);
        if (update) {
            std::ofstream out(fixture_path(name));
            for (const auto& line : order) {
                out << line << "\n";
            }
        }
        const auto golden = read_lines(fixture_path(name));
        std::string verdict = "match";
        if (golden != order) {
            pass = false;
            std::size_t i = 0;
            while (i < golden.size() && i < order.size() && golden[i] == order[i]) {
                ++i;
            }
            verdict = "differs at line " + std::to_string(i + 1);
        }
        detail += std::string(detail.empty() ? "" : ", ") + name + " " + verdict + " (" +
                  std::to_string(order.size()) + " events)";
        traces.emplace_back(std::move(s), std::move(result));
    }
    return {pass, detail};
}

Verdict criterion_oracle() {
    std::mt19937_64 rng(4242);
    const auto start = Clock::now();
    int mismatches = 0;
    for (int i = 0; i < kOracleInstances; ++i) {
        const AtomId atoms = 2 + static_cast<AtomId>(rng() % 8);
        AtomSet state;
        std::set<AtomId> raw_state;
        for (AtomId a = 0; a < atoms; ++a) {
            if (rng() % 2 == 0) {
                state.insert(a);
                raw_state.insert(a);
            }
        }
        const Time now = static_cast<Time>(rng() % 1000);
        PromiseStore store;
        std::vector<oracle::RawPromise> raw;
        for (std::size_t k = rng() % 10; k > 0; --k) {
            const Lit l{static_cast<AtomId>(rng() % atoms), rng() % 2 == 0};
            const Time at = now + static_cast<Time>(rng() % 500);
            if (store.add(Promise{l, at, "g" + std::to_string(k), "A"})) {
                raw.emplace_back(l.atom, l.positive, at);
            }
        }
        std::vector<Lit> lits;
        std::vector<oracle::RawLit> raw_lits;
        for (std::size_t k = rng() % 6; k > 0; --k) {
            const Lit l{static_cast<AtomId>(rng() % atoms), rng() % 2 == 0};
            lits.push_back(l);
            raw_lits.emplace_back(l.atom, l.positive);
        }
        mismatches += from_time_set(lits, state, now, store) != oracle::from_set(raw_lits, raw_state, now, raw);
        mismatches += until_time_set(lits, state, now, store) != oracle::until_set(raw_lits, raw_state, now, raw);
    }
    const double wall = seconds_since(start);
    return {mismatches == 0 && wall < kOracleBudget,
            std::to_string(kOracleInstances) + " instances, " + std::to_string(mismatches) + " mismatches, " +
                fixed(wall, 3) + " s (need < " + fixed(kOracleBudget, 0) + " s)"};
}

Verdict criterion_lookahead_zero() {
    std::string detail;
    bool pass = true;
    for (const auto& name : {"xenonite-3r-5c", "s3"}) {
        Scenario zero = load(name);
        apply_options(zero, RunOptions{std::nullopt, std::nullopt, 0});
        Scenario off = load(name);
        off.promises = false;
        const bool same = write_events(run(zero).events) == write_events(run(off).events);
        pass &= same;
        detail += std::string(detail.empty() ? "" : ", ") + name + (same ? " identical" : " differs");
    }
    return {pass, detail};
}

Verdict criterion_fuzz() {
    std::mt19937_64 rng(606);
    int invalid = 0;
    int compared = 0;
    int mismatched = 0;
    int solved = 0;
    for (int i = 0; i < kFuzzInstances; ++i) {
        const auto inst = oracle::random_instance(rng);
        const PlanningTask task{inst.actions, inst.init, inst.objective, inst.tils, 500};
        const auto ucs = plan(task, PlannerConfig{SearchMode::uniform_cost});
        const auto greedy = plan(task, PlannerConfig{SearchMode::greedy});
        const auto brute = oracle::brute_force_makespan(inst.actions, inst.init, inst.tils, inst.objective,
                                                        kEnumerationDepth);
        for (const auto* r : {&ucs, &greedy}) {
            if (r->status == PlanStatus::solved &&
                !validate_plan(r->plan, inst.init, inst.tils, inst.objective).valid) {
                ++invalid;
            }
        }
        if (ucs.status == PlanStatus::solved) {
            ++solved;
        }
        // Enumeration covers plans of up to four actions.
        const bool comparable = ucs.status != PlanStatus::solved || ucs.plan.steps.size() <=
                                                                       static_cast<std::size_t>(kEnumerationDepth);
        if (comparable) {
            ++compared;
            const std::optional<Time> got =
                ucs.status == PlanStatus::solved ? std::optional<Time>(makespan(ucs.plan)) : std::nullopt;
            mismatched += got != brute;
        } else if (brute && makespan(ucs.plan) > *brute) {
            ++mismatched;
        }
    }
    return {invalid == 0 && mismatched == 0,
            std::to_string(kFuzzInstances) + " instances, " + std::to_string(solved) + " solvable, " +
                std::to_string(invalid) + " invalid plans, " + std::to_string(compared) +
                " compared with enumeration, " + std::to_string(mismatched) + " makespan mismatches"};
}

template <typename Check>
Verdict over_traces(const SpeedupRuns& runs, const std::vector<std::pair<Scenario, RunResult>>& scripted,
                    Check check) {
    std::size_t traces = 0;
    std::size_t problems = 0;
    std::string first;
    auto visit = [&](const Scenario& s, const RunResult& r) {
        const auto found = check(s, r.events);
        ++traces;
        problems += found.size();
        if (first.empty() && !found.empty()) {
            first = found.front();
        }
    };
    for (std::size_t i = 0; i < runs.scenarios.size(); ++i) {
        Scenario off = runs.scenarios[i];
        off.promises = false;
        visit(runs.scenarios[i], runs.promises[i]);
        visit(off, runs.baseline[i]);
    }
    for (const auto& [s, r] : scripted) {
        visit(s, r);
    }
    return {problems == 0,
            std::to_string(traces) + " traces, " + std::to_string(problems) + " problems" +
                (first.empty() ? "" : "; first: " + first)};
}

Verdict criterion_determinism() {
    const Scenario s = load("xenonite-3r-5c");
    const auto dir = std::filesystem::temp_directory_path();
    const auto a = dir / "pledge-acceptance-a.jsonl";
    const auto b = dir / "pledge-acceptance-b.jsonl";
    save_events(a, run(s).events);
    save_events(b, run(s).events);
    auto bytes = [](const std::filesystem::path& p) {
        std::ifstream in(p, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in), {});
    };
    const std::string first = bytes(a);
    const bool same = !first.empty() && first == bytes(b);
    std::filesystem::remove(a);
    std::filesystem::remove(b);
    return {same, std::to_string(first.size()) + " bytes, " + (same ? "identical" : "different")};
}

} // namespace

int main(int argc, char** argv) {
    const bool update = argc > 1 && std::string(argv[1]) == "--update-fixtures";

    SpeedupRuns runs;
    std::vector<std::pair<Scenario, RunResult>> scripted;
    Verdict loaded = guarded([&] {
        runs = speedup_runs();
        return Verdict{true, ""};
    });

    report(1, "promises shorten the xenonite-3r-5c makespan on every seed",
           loaded.pass ? guarded([&] { return criterion_speedup(runs); }) : loaded);
    report(2, "every planner call finishes within the latency budget",
           loaded.pass ? guarded([&] { return criterion_planner(runs); }) : loaded);
    report(3, "scripted scenarios reproduce the golden event orders",
           guarded([&] { return criterion_scenarios(update, scripted); }));
    report(4, "From/Until agree with the reference interpreter", guarded(criterion_oracle));
    report(5, "lookahead zero logs equal promise-free logs", guarded(criterion_lookahead_zero));
    report(6, "fuzzed plans validate and uniform-cost makespans are optimal", guarded(criterion_fuzz));
    report(7, "no resource ever has two holders and handovers keep their order", guarded([&] {
               return over_traces(runs, scripted,
                                  [](const Scenario&, const std::vector<Event>& ev) { return oracle::check_locks(ev); });
           }));
    report(8, "no action starts while its precondition is false", guarded([&] {
               return over_traces(runs, scripted, [](const Scenario& s, const std::vector<Event>& ev) {
                   return oracle::check_purity(ev, s);
               });
           }));
    report(9, "same seed yields byte-identical event logs", guarded(criterion_determinism));

    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
