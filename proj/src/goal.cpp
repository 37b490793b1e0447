#include "pledge/goal.hpp"

#include <algorithm>
#include <cstdio>

#include "pledge/error.hpp"

namespace pledge {

std::string to_string(GoalMode mode) {
    switch (mode) {
    case GoalMode::formulated:
        return "FORMULATED";
    case GoalMode::selected:
        return "SELECTED";
    case GoalMode::expanded:
        return "EXPANDED";
    case GoalMode::committed:
        return "COMMITTED";
    case GoalMode::dispatched:
        return "DISPATCHED";
    case GoalMode::finished:
        return "FINISHED";
    case GoalMode::failed:
        return "FAILED";
    case GoalMode::rejected:
        return "REJECTED";
    case GoalMode::retracted:
        return "RETRACTED";
    }
    return "?";
}

std::string to_string(GoalEvent event) {
    switch (event) {
    case GoalEvent::select:
        return "select";
    case GoalEvent::expand:
        return "expand";
    case GoalEvent::commit:
        return "commit";
    case GoalEvent::dispatch:
        return "dispatch";
    case GoalEvent::finish:
        return "finish";
    case GoalEvent::fail:
        return "fail";
    case GoalEvent::reject:
        return "reject";
    case GoalEvent::retract:
        return "retract";
    }
    return "?";
}

bool is_terminal(GoalMode mode) noexcept {
    return mode == GoalMode::finished || mode == GoalMode::failed || mode == GoalMode::rejected ||
           mode == GoalMode::retracted;
}

std::optional<GoalMode> next_mode(GoalMode mode, GoalEvent event) noexcept {
    const bool pre_dispatch = mode == GoalMode::formulated || mode == GoalMode::selected ||
                              mode == GoalMode::expanded || mode == GoalMode::committed;
    switch (event) {
    case GoalEvent::select:
        return mode == GoalMode::formulated ? std::optional(GoalMode::selected) : std::nullopt;
    case GoalEvent::expand:
        return mode == GoalMode::selected ? std::optional(GoalMode::expanded) : std::nullopt;
    case GoalEvent::commit:
        return mode == GoalMode::expanded ? std::optional(GoalMode::committed) : std::nullopt;
    case GoalEvent::dispatch:
        return mode == GoalMode::committed ? std::optional(GoalMode::dispatched) : std::nullopt;
    case GoalEvent::finish:
        return mode == GoalMode::dispatched ? std::optional(GoalMode::finished) : std::nullopt;
    case GoalEvent::fail:
        return mode == GoalMode::dispatched ? std::optional(GoalMode::failed) : std::nullopt;
    case GoalEvent::reject:
        return pre_dispatch ? std::optional(GoalMode::rejected) : std::nullopt;
    case GoalEvent::retract:
        return pre_dispatch ? std::optional(GoalMode::retracted) : std::nullopt;
    }
    return std::nullopt;
}

std::vector<GoalCandidate> ground_operator(const GoalOperator& op,
                                           const Signature& objects,
                                           const std::map<std::string, std::string>& fixed) {
    std::vector<std::vector<std::string>> domains;
    for (const auto& p : op.params) {
        if (!objects.has_type(p.type)) {
            throw ConfigError("goal operator " + op.class_name + ": unknown parameter type '" + p.type + "'");
        }
        auto pin = fixed.find(p.name);
        if (pin != fixed.end()) {
            const auto& all = objects.objects_of(p.type);
            if (std::find(all.begin(), all.end(), pin->second) == all.end()) {
                return {};
            }
            domains.push_back({pin->second});
        } else {
            domains.push_back(objects.objects_of(p.type));
        }
        if (domains.back().empty()) {
            return {};
        }
    }
    std::vector<GoalCandidate> out;
    std::vector<std::size_t> index(domains.size(), 0);
    for (;;) {
        GoalCandidate c{&op, {}};
        for (std::size_t i = 0; i < domains.size(); ++i) {
            c.binding.push_back(domains[i][index[i]]);
        }
        out.push_back(std::move(c));
        bool done = true;
        for (std::size_t pos = domains.size(); pos > 0;) {
            --pos;
            if (++index[pos] < domains[pos].size()) {
                done = false;
                break;
            }
            index[pos] = 0;
        }
        if (done) {
            break;
        }
    }
    return out;
}

std::string Goal::label() const {
    std::string out = (op != nullptr ? op->class_name : std::string("?")) + "(";
    for (std::size_t i = 0; i < binding.size(); ++i) {
        if (i != 0) {
            out += ',';
        }
        out += binding[i];
    }
    out += ')';
    return out;
}

std::string make_goal_id(const std::string& class_name, const Binding& binding, std::uint64_t counter) {
    std::uint32_t h = 2166136261U;
    auto mix = [&](unsigned char c) {
        h ^= c;
        h *= 16777619U;
    };
    for (std::size_t i = 0; i < binding.size(); ++i) {
        if (i != 0) {
            mix(',');
        }
        for (char c : binding[i]) {
            mix(static_cast<unsigned char>(c));
        }
    }
    char hex[9];
    std::snprintf(hex, sizeof hex, "%08x", h);
    return class_name + "#" + hex + "#" + std::to_string(counter);
}

Goal make_goal(const GoalCandidate& candidate, std::string agent, Time now, std::uint64_t counter) {
    Goal g;
    g.op = candidate.op;
    g.binding = candidate.binding;
    g.id = make_goal_id(candidate.op->class_name, candidate.binding, counter);
    g.agent = std::move(agent);
    g.mode = GoalMode::formulated;
    g.formulated_at = now;
    g.trace.push_back({now, GoalMode::formulated});
    return g;
}

TransitionResult transition(Goal& goal, GoalEvent event, Time now, const LifecycleHooks& hooks) {
    TransitionResult r;
    r.from = goal.mode;
    const auto target = next_mode(goal.mode, event);
    if (!target) {
        r.to = goal.mode;
        r.error = "illegal transition: " + to_string(goal.mode) + " + " + to_string(event) + " for goal " + goal.id;
        return r;
    }
    goal.mode = *target;
    goal.trace.push_back({now, goal.mode});
    r.ok = true;
    r.to = goal.mode;
    if ((goal.mode == GoalMode::finished || goal.mode == GoalMode::failed) && hooks.on_terminal) {
        hooks.on_terminal(goal);
    }
    return r;
}

int priority_of(const Goal& goal, const SelectionConfig& config) {
    int p = goal.op->priority;
    auto it = config.class_priority.find(goal.op->class_name);
    if (it != config.class_priority.end()) {
        p = it->second;
    }
    for (const auto& value : goal.binding) {
        auto bonus = config.object_priority.find(value);
        if (bonus != config.object_priority.end()) {
            p += bonus->second;
        }
    }
    return p;
}

std::optional<std::string> select_goal(std::span<const Goal* const> formulated, const SelectionConfig& config) {
    const Goal* best = nullptr;
    int best_priority = 0;
    for (const Goal* g : formulated) {
        if (g->mode != GoalMode::formulated) {
            throw ContractViolation("select_goal called with goal " + g->id + " in mode " + to_string(g->mode));
        }
        const int p = priority_of(*g, config);
        if (best == nullptr || p > best_priority ||
            (p == best_priority && (g->formulated_at < best->formulated_at ||
                                    (g->formulated_at == best->formulated_at && g->id < best->id)))) {
            best = g;
            best_priority = p;
        }
    }
    if (best == nullptr) {
        return std::nullopt;
    }
    return best->id;
}

std::optional<std::string> select_goal(std::span<const Goal> formulated, const SelectionConfig& config) {
    std::vector<const Goal*> ptrs;
    for (const auto& g : formulated) {
        ptrs.push_back(&g);
    }
    return select_goal(std::span<const Goal* const>(ptrs), config);
}

} // namespace pledge
