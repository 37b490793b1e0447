#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace pledge {

struct LockHolder {
    std::string agent;
    std::string goal_id;

    friend bool operator==(const LockHolder&, const LockHolder&) = default;
};

enum class Acquisition { granted, denied, deferred };

std::string to_string(Acquisition outcome);

struct LockRequest {
    std::string agent;
    std::string goal_id;
    std::vector<std::string> resources;
    bool promise_dependent = false;
    /// Goals whose promises the requester was formulated from.
    std::set<std::string> promise_sources;
};

enum class LockEventKind { granted, denied, deferred, handover, released };

std::string to_string(LockEventKind kind);

struct LockEvent {
    LockEventKind kind = LockEventKind::granted;
    std::string resource;
    std::string agent;
    std::string goal_id;
    /// Current holder for denied/deferred, previous holder for handover.
    std::optional<LockHolder> other;
};

struct ResourceOutcome {
    std::string resource;
    Acquisition outcome = Acquisition::granted;
    std::optional<LockHolder> blocker;
};

struct LockVerdict {
    Acquisition overall = Acquisition::granted;
    std::vector<ResourceOutcome> resources;
    std::vector<LockEvent> events;
};

struct LockConfig {
    /// Defer on any holder, not only on a goal the requester depends on.
    bool defer_on_any_holder = false;
};

/// Name of the shadow resource a promise-dependent goal waits on.
std::string promised_resource(const std::string& resource);
bool is_promised_resource(const std::string& resource);

/// Central lock authority. Requests are all-or-nothing: a denied request
/// changes nothing.
class LockTable {
public:
    explicit LockTable(LockConfig config = {}) : config_(config) {}

    LockVerdict request(const LockRequest& request);
    /// Frees everything the goal holds. A freed resource with a waiting
    /// promised-resource holder passes to that goal, which then drops the
    /// promised resource, all in the same step.
    std::vector<LockEvent> release(const std::string& goal_id);

    std::optional<LockHolder> holder(const std::string& resource) const;
    std::vector<std::string> held_by(const std::string& goal_id) const;
    const std::map<std::string, LockHolder>& holders() const noexcept { return holders_; }
    bool holds(const std::string& goal_id, const std::string& resource) const;
    std::uint64_t version() const noexcept { return version_; }

private:
    LockConfig config_;
    std::map<std::string, LockHolder> holders_;
    std::uint64_t version_ = 0;
};

} // namespace pledge
