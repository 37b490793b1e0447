#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pledge/goal_operator.hpp"
#include "pledge/planner.hpp"
#include "pledge/time.hpp"
#include "pledge/world.hpp"

namespace pledge {

enum class GoalMode { formulated, selected, expanded, committed, dispatched, finished, failed, rejected, retracted };

enum class GoalEvent { select, expand, commit, dispatch, finish, fail, reject, retract };

std::string to_string(GoalMode mode);
std::string to_string(GoalEvent event);
bool is_terminal(GoalMode mode) noexcept;
/// Target mode of a legal (mode, event) edge, or nullopt.
std::optional<GoalMode> next_mode(GoalMode mode, GoalEvent event) noexcept;

struct GoalCandidate {
    const GoalOperator* op = nullptr;
    Binding binding;
};

/// One candidate per element of the typed product of parameter domains, in
/// lexicographic order of the binding. `fixed` pins parameters by name.
std::vector<GoalCandidate> ground_operator(const GoalOperator& op,
                                           const Signature& objects,
                                           const std::map<std::string, std::string>& fixed = {});

struct GoalTraceEntry {
    Time time = 0;
    GoalMode mode = GoalMode::formulated;
};

struct Goal {
    std::string id;
    const GoalOperator* op = nullptr;
    Binding binding;
    std::string agent;
    GoalMode mode = GoalMode::formulated;
    Time formulated_at = 0;
    std::optional<Plan> plan;
    bool promise_dependent = false;
    /// Goals whose promises made this goal formulable.
    std::set<std::string> promise_sources;
    std::set<std::string> acquired_resources;
    std::vector<GoalTraceEntry> trace;

    /// `Class(arg1,arg2)`
    std::string label() const;
};

Goal make_goal(const GoalCandidate& candidate, std::string agent, Time now, std::uint64_t counter);
/// `<class>#<fnv1a-32 of binding>#<counter>`
std::string make_goal_id(const std::string& class_name, const Binding& binding, std::uint64_t counter);

struct LifecycleHooks {
    /// Fires after a goal enters FINISHED or FAILED.
    std::function<void(const Goal&)> on_terminal;
};

struct TransitionResult {
    bool ok = false;
    GoalMode from = GoalMode::formulated;
    GoalMode to = GoalMode::formulated;
    std::string error;
};

/// Applies a lifecycle edge. Illegal edges leave the goal untouched.
TransitionResult transition(Goal& goal, GoalEvent event, Time now, const LifecycleHooks& hooks = {});

struct SelectionConfig {
    /// Overrides GoalOperator::priority per class.
    std::map<std::string, int> class_priority;
    /// Added once for every binding value naming the object.
    std::map<std::string, int> object_priority;
};

int priority_of(const Goal& goal, const SelectionConfig& config);

/// Highest priority; ties by earliest formulation, then smaller id.
std::optional<std::string> select_goal(std::span<const Goal* const> formulated, const SelectionConfig& config);
std::optional<std::string> select_goal(std::span<const Goal> formulated, const SelectionConfig& config);

} // namespace pledge
