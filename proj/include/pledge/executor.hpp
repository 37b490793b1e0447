#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pledge/planner.hpp"
#include "pledge/time.hpp"
#include "pledge/world.hpp"

namespace pledge {

struct MonitorConfig {
    Time pending_timeout = 300;
    /// Applied to the pending timeout of promise-dependent goals.
    Time promise_multiplier = 2;
    int max_retries = 0;

    /// Throws ConfigError unless pending_timeout > 0 and promise_multiplier >= 1.
    void validate() const;
    Time effective_timeout(bool promise_dependent) const;
};

enum class Phase { running, pending };

struct CurrentAction {
    std::size_t step = 0;
    Phase phase = Phase::pending;
    /// Entry time of the current phase.
    Time since = 0;
    /// Completion time while running.
    Time ends_at = 0;
};

struct ExecutionState {
    std::string goal_id;
    Plan plan;
    bool promise_dependent = false;
    std::size_t cursor = 0;
    std::optional<CurrentAction> current;
    std::vector<int> retries;

    ExecutionState() = default;
    ExecutionState(std::string goal, Plan p, bool dependent);

    bool done() const noexcept { return cursor >= plan.steps.size() && !current; }
};

enum class ExecEventKind { action_start, action_pending, action_done, action_failed, action_timeout, action_retry };

std::string to_string(ExecEventKind kind);

struct ExecEvent {
    ExecEventKind kind = ExecEventKind::action_start;
    std::size_t step = 0;
    const GroundAction* action = nullptr;
    std::string detail;
};

enum class ExecStatus { active, finished, failed };

struct ExecResult {
    ExecStatus status = ExecStatus::active;
    std::vector<ExecEvent> events;
    /// Set by complete_action when effects were produced.
    std::optional<WorldUpdate> update;
};

struct ExecContext {
    /// Actual world atoms; promises never enter here.
    const AtomSet* atoms = nullptr;
    Time now = 0;
    /// Whether the goal currently holds a resource named by an action argument.
    std::function<bool(const GroundAction&)> resources_ready;
    /// Actual duration of an action starting now.
    std::function<Time(const GroundAction&)> duration;
};

/// Starts the next step, keeps a pending step waiting, or times it out.
ExecResult tick(ExecutionState& exec, const ExecContext& ctx, const MonitorConfig& cfg);

/// Completes the running step at its end time. With `succeeded` false the
/// step produced no effects and is retried or fails the goal.
ExecResult complete_action(ExecutionState& exec, Time now, const MonitorConfig& cfg, bool succeeded = true);

/// Running step whose end time has been reached, if any.
bool completion_due(const ExecutionState& exec, Time now) noexcept;

} // namespace pledge
