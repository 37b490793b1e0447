#include "pledge/lock.hpp"

#include <algorithm>

namespace pledge {

namespace {

constexpr std::string_view kPromisedPrefix = "promised-";

} // namespace

std::string to_string(Acquisition outcome) {
    switch (outcome) {
    case Acquisition::granted: return "GRANTED";
    case Acquisition::denied: return "DENIED";
    case Acquisition::deferred: return "DEFERRED";
    }
    return "?";
}

std::string to_string(LockEventKind kind) {
    switch (kind) {
    case LockEventKind::granted: return "lock-granted";
    case LockEventKind::denied: return "lock-denied";
    case LockEventKind::deferred: return "lock-deferred";
    case LockEventKind::handover: return "lock-handover";
    case LockEventKind::released: return "lock-released";
    }
    return "?";
}

std::string promised_resource(const std::string& resource) {
    return std::string(kPromisedPrefix) + resource;
}

bool is_promised_resource(const std::string& resource) {
    return resource.rfind(kPromisedPrefix, 0) == 0;
}

LockVerdict LockTable::request(const LockRequest& req) {
    LockVerdict verdict;
    std::vector<std::string> resources = req.resources;
    std::sort(resources.begin(), resources.end());
    resources.erase(std::unique(resources.begin(), resources.end()), resources.end());

    // Evaluate every resource before touching the table.
    for (const auto& r : resources) {
        ResourceOutcome out{r, Acquisition::granted, std::nullopt};
        const auto held = holders_.find(r);
        if (held != holders_.end() && held->second.goal_id != req.goal_id) {
            out.blocker = held->second;
            const auto shadow = holders_.find(promised_resource(r));
            const bool may_defer =
                req.promise_dependent &&
                (config_.defer_on_any_holder || req.promise_sources.count(held->second.goal_id) != 0);
            if (shadow != holders_.end() && shadow->second.goal_id == req.goal_id) {
                out.outcome = Acquisition::deferred;
            } else if (may_defer && shadow == holders_.end()) {
                out.outcome = Acquisition::deferred;
            } else {
                out.outcome = Acquisition::denied;
                if (shadow != holders_.end()) {
                    out.blocker = shadow->second;
                }
            }
        }
        verdict.resources.push_back(std::move(out));
    }

    const bool denied = std::any_of(verdict.resources.begin(), verdict.resources.end(),
                                    [](const ResourceOutcome& o) { return o.outcome == Acquisition::denied; });
    if (denied) {
        verdict.overall = Acquisition::denied;
        for (const auto& o : verdict.resources) {
            if (o.outcome == Acquisition::denied) {
                verdict.events.push_back({LockEventKind::denied, o.resource, req.agent, req.goal_id, o.blocker});
            }
        }
        return verdict;
    }

    const LockHolder self{req.agent, req.goal_id};
    bool changed = false;
    for (const auto& o : verdict.resources) {
        if (o.outcome == Acquisition::granted) {
            changed |= holders_.emplace(o.resource, self).second;
            verdict.events.push_back({LockEventKind::granted, o.resource, req.agent, req.goal_id, std::nullopt});
        } else {
            verdict.overall = Acquisition::deferred;
            const auto shadow = promised_resource(o.resource);
            changed |= holders_.emplace(shadow, self).second;
            verdict.events.push_back({LockEventKind::deferred, o.resource, req.agent, req.goal_id, o.blocker});
            verdict.events.push_back({LockEventKind::granted, shadow, req.agent, req.goal_id, std::nullopt});
        }
    }
    if (changed) {
        ++version_;
    }
    return verdict;
}

std::vector<LockEvent> LockTable::release(const std::string& goal_id) {
    std::vector<LockEvent> events;
    for (const auto& r : held_by(goal_id)) {
        const LockHolder previous = holders_.at(r);
        holders_.erase(r);
        events.push_back({LockEventKind::released, r, previous.agent, goal_id, std::nullopt});
        if (is_promised_resource(r)) {
            continue;
        }
        const auto shadow = holders_.find(promised_resource(r));
        if (shadow != holders_.end()) {
            const LockHolder next = shadow->second;
            holders_.erase(shadow);
            holders_.emplace(r, next);
            events.push_back({LockEventKind::handover, r, next.agent, next.goal_id, previous});
            events.push_back({LockEventKind::released, promised_resource(r), next.agent, next.goal_id, std::nullopt});
        }
    }
    if (!events.empty()) {
        ++version_;
    }
    return events;
}

std::optional<LockHolder> LockTable::holder(const std::string& resource) const {
    const auto it = holders_.find(resource);
    if (it == holders_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::vector<std::string> LockTable::held_by(const std::string& goal_id) const {
    std::vector<std::string> out;
    for (const auto& [r, h] : holders_) {
        if (h.goal_id == goal_id) {
            out.push_back(r);
        }
    }
    return out;
}

bool LockTable::holds(const std::string& goal_id, const std::string& resource) const {
    const auto it = holders_.find(resource);
    return it != holders_.end() && it->second.goal_id == goal_id;
}

} // namespace pledge
