#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pledge/error.hpp"
#include "pledge/event_log.hpp"
#include "pledge/pddl.hpp"
#include "pledge/planner.hpp"
#include "pledge/report.hpp"
#include "pledge/scenario.hpp"
#include "pledge/sim.hpp"

namespace py = pybind11;
using namespace pledge;

namespace {

py::dict run_scenario(const std::string& path,
                      std::optional<std::uint64_t> seed,
                      std::optional<bool> promises,
                      std::optional<Time> lookahead) {
    Scenario sc = load_scenario(path);
    apply_options(sc, RunOptions{seed, promises, lookahead});
    RunResult result;
    {
        py::gil_scoped_release release;
        result = run(sc);
    }
    const RunReport report = build_report(result.events);
    py::dict out;
    out["events"] = write_events(result.events);
    out["objective_reached"] = result.objective_reached;
    out["end_time"] = result.end_time;
    out["makespan"] = report.makespan;
    out["promises_in_effect"] = report.promises;
    out["planner_calls"] = result.planner_seconds.size();
    return out;
}

py::dict plan_pddl(const std::string& domain_text, const std::string& problem_text, const std::string& mode) {
    if (mode != "uniform-cost" && mode != "greedy") {
        throw ConfigError("mode must be uniform-cost or greedy");
    }
    const Domain domain = parse_domain(domain_text);
    const Problem problem = parse_problem(problem_text, domain);
    const Signature sig = make_signature(domain, problem.objects);
    const AtomSet init = sig.to_set(problem.init);
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
    py::list steps;
    for (const auto& s : result.plan.steps) {
        steps.append(py::make_tuple(s.start, s.action.duration, s.action.label()));
    }
    py::dict out;
    out["status"] = to_string(result.status);
    out["steps"] = steps;
    out["makespan"] = makespan(result.plan);
    out["expanded"] = result.expanded;
    return out;
}

RunReport report_of(const std::string& events) {
    return build_report(read_events(events));
}

} // namespace

PYBIND11_MODULE(_pledge, m) {
    m.doc() = "Goal reasoning with promises: scenario simulation, temporal planning, reports";

    // Translators run newest first, so the base class is registered first.
    auto base = py::register_exception<Error>(m, "PledgeError");
    py::register_exception<ParseError>(m, "ParseError", base);
    py::register_exception<ConfigError>(m, "ConfigError", base);

    m.def("run_scenario", &run_scenario, py::arg("path"), py::arg("seed") = py::none(),
          py::arg("promises") = py::none(), py::arg("lookahead") = py::none(),
          "Simulate a scenario JSON file; returns the event log as JSONL plus summary fields.");
    m.def("plan", &plan_pddl, py::arg("domain"), py::arg("problem"), py::arg("mode") = "uniform-cost",
          "Plan PDDL domain and problem texts; steps are (start, duration, label).");
    m.def("report", [](const std::string& events) { return format_report(report_of(events)); }, py::arg("events"));
    m.def("gantt", [](const std::string& events, std::size_t width) { return format_gantt(report_of(events), width); },
          py::arg("events"), py::arg("width") = 72);
    m.def("makespan", [](const std::string& events) { return report_of(events).makespan; }, py::arg("events"));
    m.def("compare",
          [](const std::string& a, const std::string& b) {
              const Comparison c = compare(report_of(a), report_of(b));
              py::dict out;
              out["baseline_makespan"] = c.baseline_makespan;
              out["promises_makespan"] = c.promises_makespan;
              out["delta"] = c.delta;
              out["relative"] = c.relative;
              out["text"] = format_comparison(c);
              return out;
          },
          py::arg("a"), py::arg("b"));
}
