#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pledge/pddl.hpp"
#include "pledge/time.hpp"
#include "pledge/world.hpp"

namespace pledge {

struct TimedAction {
    Time start = 0;
    GroundAction action;
};

/// Sequential timed plan: each step starts no earlier than the previous one ends.
struct Plan {
    std::vector<TimedAction> steps;
};

/// Last start plus last duration; 0 for the empty plan.
Time makespan(const Plan& plan);

enum class SearchMode { uniform_cost, greedy };

struct PlannerConfig {
    SearchMode mode = SearchMode::uniform_cost;
    std::size_t node_budget = 200000;
};

enum class PlanStatus { solved, unsolvable, budget_exceeded };

struct PlanResult {
    PlanStatus status = PlanStatus::unsolvable;
    Plan plan;
    std::size_t expanded = 0;
    std::size_t generated = 0;
};

/// TIL times are relative to the start of the plan and must be positive.
struct PlanningTask {
    std::span<const GroundAction> actions;
    AtomSet init;
    std::vector<Lit> objective;
    std::vector<TimedLit> tils;
    Time bound = 10000;
};

/// Forward search over (atoms, time, pending TILs). Successors start an
/// applicable action (effects at its end) or wait for the next TIL time.
/// At equal times, action end effects apply before TILs, and both before
/// any action start.
PlanResult plan(const PlanningTask& task, const PlannerConfig& config = {});

struct Validation {
    bool valid = false;
    std::optional<std::size_t> failed_step;
    std::string message;
};

/// Replays the timeline event by event; independent of the search code.
Validation validate_plan(const Plan& plan,
                         const AtomSet& init,
                         std::span<const TimedLit> tils,
                         std::span<const Lit> objective);

std::string to_string(PlanStatus status);

} // namespace pledge
