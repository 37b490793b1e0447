#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pledge/executor.hpp"
#include "pledge/goal.hpp"
#include "pledge/goal_operator.hpp"
#include "pledge/lock.hpp"
#include "pledge/pddl.hpp"
#include "pledge/planner.hpp"
#include "pledge/promise.hpp"
#include "pledge/time.hpp"
#include "pledge/world.hpp"

namespace pledge {

struct AgentSpec {
    std::string id;
    /// First tick at which the agent reasons and acts.
    Time start = 0;
};

/// Keeps the named agent's goals of `goal_class` from releasing their
/// resources when they end.
struct Fault {
    std::string kind;
    std::string agent;
    std::string goal_class;
};

struct Scenario {
    std::string name;
    std::string domain_path;
    std::string operators_path;
    Domain domain;
    std::vector<GoalOperator> operators;
    std::vector<TypedParam> objects;
    Signature sig;
    AtomSet init;
    std::vector<Lit> objective;
    std::vector<AgentSpec> agents;
    std::map<std::string, Time> durations;
    MonitorConfig monitor;
    /// Replaces every operator's lookahead when set.
    std::optional<Time> lookahead;
    bool promises = true;
    FormulationMode formulation = FormulationMode::optimistic;
    Time stale_grace = 1;
    std::uint64_t seed = 1;
    Time tick_bound = 10000;
    Time duration_jitter = 0;
    double action_failure_probability = 0.0;
    /// Delay before other agents see a published update.
    Time latency = 0;
    std::vector<Fault> faults;
    SelectionConfig selection;
    PlannerConfig planner;
    LockConfig locks;

    Time lookahead_of(const GoalOperator& op) const { return lookahead.value_or(op.lookahead); }
    /// Promises are in effect only if enabled and some lookahead is positive.
    bool promises_active() const;
};

/// Reads the JSON scenario and the domain and goal-operator files it names
/// (paths relative to the scenario file). Throws ConfigError or ParseError
/// with the offending location.
Scenario load_scenario(const std::filesystem::path& path);
Scenario parse_scenario(std::string_view json_text, const std::filesystem::path& base_dir, const std::string& source);

} // namespace pledge
