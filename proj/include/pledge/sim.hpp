#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pledge/event_log.hpp"
#include "pledge/scenario.hpp"
#include "pledge/time.hpp"

namespace pledge {

/// Command-line overrides applied on top of a loaded scenario.
struct RunOptions {
    std::optional<std::uint64_t> seed;
    std::optional<bool> promises;
    std::optional<Time> lookahead;
};

void apply_options(Scenario& scenario, const RunOptions& options);

struct RunResult {
    std::vector<Event> events;
    bool objective_reached = false;
    /// Tick of objective satisfaction, or of the timeout.
    Time end_time = 0;
    /// Wall-clock seconds per planner call; not part of the event log.
    std::vector<double> planner_seconds;
};

/// Runs the scenario to objective satisfaction or the tick bound. Identical
/// scenarios produce identical event logs.
RunResult run(const Scenario& scenario);

} // namespace pledge
