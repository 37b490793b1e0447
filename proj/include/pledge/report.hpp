#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pledge/event_log.hpp"
#include "pledge/time.hpp"

namespace pledge {

/// Execution span of one dispatched goal.
struct GoalSpan {
    std::string goal;
    std::string label;
    std::string agent;
    Time formulated = 0;
    Time dispatched = 0;
    std::optional<Time> ended;
    /// "finished", "failed", or "running" when the log ends first.
    std::string outcome = "running";
    bool promise_dependent = false;

    friend bool operator==(const GoalSpan&, const GoalSpan&) = default;
};

struct AgentUsage {
    std::string agent;
    /// Ticks spent with an action running.
    Time busy = 0;
    std::size_t goals = 0;

    friend bool operator==(const AgentUsage&, const AgentUsage&) = default;
};

struct PromiseStats {
    std::size_t issued = 0;
    /// Goals formulated only thanks to promises.
    std::size_t used_in_formulation = 0;
    std::size_t stale = 0;
    std::size_t retracted = 0;

    friend bool operator==(const PromiseStats&, const PromiseStats&) = default;
};

/// Everything here is derived from the event log alone.
struct RunReport {
    std::string scenario;
    std::uint64_t seed = 0;
    bool promises = false;
    std::optional<Time> makespan;
    Time end_time = 0;
    std::vector<GoalSpan> goals;
    std::vector<AgentUsage> agents;
    PromiseStats promise_stats;
    /// Earliest formulation time per goal label.
    std::map<std::string, Time> first_formulated;
    std::size_t invariant_violations = 0;
    std::size_t events = 0;

    friend bool operator==(const RunReport&, const RunReport&) = default;
};

RunReport build_report(std::span<const Event> events);
std::string format_report(const RunReport& report);
/// One row per agent, one bar per goal span. Promise-dependent goals are
/// drawn with '/' and others with '='.
std::string format_gantt(const RunReport& report, std::size_t width = 72);

struct GoalDelta {
    std::string label;
    Time baseline = 0;
    Time promises = 0;
};

struct Comparison {
    std::string scenario;
    Time baseline_makespan = 0;
    Time promises_makespan = 0;
    /// promises minus baseline.
    Time delta = 0;
    double relative = 0.0;
    std::vector<GoalDelta> formulation_deltas;
};

/// `a` and `b` in either order; the run with promises enabled is the
/// treatment. Throws Error when scenarios differ, both runs are baselines,
/// or a run never reached the objective.
Comparison compare(const RunReport& a, const RunReport& b);
std::string format_comparison(const Comparison& comparison);

struct SampleStats {
    double mean = 0.0;
    /// Sample standard deviation; 0 for fewer than two samples.
    double stddev = 0.0;
};

SampleStats sample_stats(std::span<const double> values);

} // namespace pledge
