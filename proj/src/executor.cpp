#include "pledge/executor.hpp"

#include "pledge/error.hpp"

namespace pledge {

void MonitorConfig::validate() const {
    if (pending_timeout <= 0) {
        throw ConfigError("pending_timeout must be positive");
    }
    if (promise_multiplier < 1) {
        throw ConfigError("promise_multiplier must be at least 1");
    }
    if (max_retries < 0) {
        throw ConfigError("max_retries must not be negative");
    }
}

Time MonitorConfig::effective_timeout(bool promise_dependent) const {
    return promise_dependent ? pending_timeout * promise_multiplier : pending_timeout;
}

ExecutionState::ExecutionState(std::string goal, Plan p, bool dependent)
    : goal_id(std::move(goal)), plan(std::move(p)), promise_dependent(dependent), retries(plan.steps.size(), 0) {}

std::string to_string(ExecEventKind kind) {
    switch (kind) {
    case ExecEventKind::action_start: return "action-start";
    case ExecEventKind::action_pending: return "action-pending";
    case ExecEventKind::action_done: return "action-done";
    case ExecEventKind::action_failed: return "action-failed";
    case ExecEventKind::action_timeout: return "action-timeout";
    case ExecEventKind::action_retry: return "action-retry";
    }
    return "?";
}

bool completion_due(const ExecutionState& exec, Time now) noexcept {
    return exec.current && exec.current->phase == Phase::running && exec.current->ends_at <= now;
}

ExecResult tick(ExecutionState& exec, const ExecContext& ctx, const MonitorConfig& cfg) {
    ExecResult result;
    if (!exec.current) {
        if (exec.cursor >= exec.plan.steps.size()) {
            result.status = ExecStatus::finished;
            return result;
        }
        exec.current = CurrentAction{exec.cursor, Phase::pending, ctx.now, 0};
        const auto& action = exec.plan.steps[exec.cursor].action;
        const bool ready = satisfies_all(*ctx.atoms, action.pre) && (!ctx.resources_ready || ctx.resources_ready(action));
        if (!ready) {
            result.events.push_back({ExecEventKind::action_pending, exec.cursor, &action, {}});
            return result;
        }
    }
    auto& cur = *exec.current;
    if (cur.phase == Phase::running) {
        return result;
    }
    const auto& action = exec.plan.steps[cur.step].action;
    const bool ready = satisfies_all(*ctx.atoms, action.pre) && (!ctx.resources_ready || ctx.resources_ready(action));
    if (ready) {
        const Time d = ctx.duration ? ctx.duration(action) : action.duration;
        cur.phase = Phase::running;
        cur.since = ctx.now;
        cur.ends_at = ctx.now + std::max<Time>(d, 1);
        result.events.push_back({ExecEventKind::action_start, cur.step, &action, "until " + std::to_string(cur.ends_at)});
        return result;
    }
    if (ctx.now - cur.since >= cfg.effective_timeout(exec.promise_dependent)) {
        result.events.push_back({ExecEventKind::action_timeout, cur.step, &action, {}});
        exec.current.reset();
        result.status = ExecStatus::failed;
    }
    return result;
}

ExecResult complete_action(ExecutionState& exec, Time now, const MonitorConfig& cfg, bool succeeded) {
    ExecResult result;
    if (!completion_due(exec, now)) {
        throw ContractViolation("complete_action called without a due running action");
    }
    const std::size_t step = exec.current->step;
    const auto& action = exec.plan.steps[step].action;
    exec.current.reset();
    if (!succeeded) {
        result.events.push_back({ExecEventKind::action_failed, step, &action, {}});
        if (exec.retries[step] < cfg.max_retries) {
            ++exec.retries[step];
            result.events.push_back({ExecEventKind::action_retry, step, &action,
                                     "attempt " + std::to_string(exec.retries[step] + 1)});
            return result;
        }
        result.status = ExecStatus::failed;
        return result;
    }
    result.events.push_back({ExecEventKind::action_done, step, &action, {}});
    result.update = WorldUpdate{action.adds, action.dels, {}, 0, {}};
    ++exec.cursor;
    if (exec.cursor >= exec.plan.steps.size()) {
        result.status = ExecStatus::finished;
    }
    return result;
}

} // namespace pledge
