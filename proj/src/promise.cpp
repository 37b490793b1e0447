#include "pledge/promise.hpp"

#include <algorithm>
#include <charconv>
#include <limits>

#include "pledge/error.hpp"

namespace pledge {

bool PromiseStore::add(Promise promise) {
    for (const auto& p : promises_) {
        if (p.literal == promise.literal && p.at == promise.at && p.goal_id == promise.goal_id) {
            return false;
        }
    }
    promises_.push_back(std::move(promise));
    ++version_;
    return true;
}

std::size_t PromiseStore::retract(const std::string& goal_id) {
    const auto before = promises_.size();
    std::erase_if(promises_, [&](const Promise& p) { return p.goal_id == goal_id; });
    const auto removed = before - promises_.size();
    if (removed != 0) {
        ++version_;
    }
    return removed;
}

Time PromiseStore::earliest(Lit literal) const {
    Time best = kInfinity;
    for (const auto& p : promises_) {
        if (p.literal == literal) {
            best = std::min(best, p.at);
        }
    }
    return best;
}

std::vector<std::string> PromiseStore::earliest_sources(Lit literal) const {
    const Time best = earliest(literal);
    std::vector<std::string> out;
    if (best == kInfinity) {
        return out;
    }
    for (const auto& p : promises_) {
        if (p.literal == literal && p.at == best &&
            std::find(out.begin(), out.end(), p.goal_id) == out.end()) {
            out.push_back(p.goal_id);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool PromiseStore::has_goal(const std::string& goal_id) const {
    return std::any_of(promises_.begin(), promises_.end(), [&](const Promise& p) { return p.goal_id == goal_id; });
}

Time from_time(Lit literal, const AtomSet& state, Time now, const PromiseStore& promises) {
    if (satisfies(state, literal)) {
        return now;
    }
    return promises.earliest(literal);
}

Time until_time(Lit literal, const AtomSet& state, Time now, const PromiseStore& promises) {
    if (satisfies(state, literal.complement())) {
        return now;
    }
    return promises.earliest(literal.complement());
}

Time from_time_set(std::span<const Lit> literals, const AtomSet& state, Time now, const PromiseStore& promises) {
    if (literals.empty()) {
        return now;
    }
    Time result = std::numeric_limits<Time>::min();
    for (Lit l : literals) {
        const Time t = from_time(l, state, now, promises);
        if (t == kInfinity) {
            return kInfinity;
        }
        result = std::max(result, t);
    }
    return result;
}

Time until_time_set(std::span<const Lit> literals, const AtomSet& state, Time now, const PromiseStore& promises) {
    Time result = kInfinity;
    for (Lit l : literals) {
        result = std::min(result, until_time(l, state, now, promises));
    }
    return result;
}

namespace {

Time saturating_add(Time a, Time b) {
    return (a > kInfinity - b) ? kInfinity : a + b;
}

} // namespace

bool check_formulation(std::span<const Lit> precondition,
                       const AtomSet& state,
                       Time now,
                       const PromiseStore& promises,
                       Time lookahead,
                       FormulationMode mode) {
    const Time horizon = saturating_add(now, lookahead);
    if (from_time_set(precondition, state, now, promises) > horizon) {
        return false;
    }
    if (mode == FormulationMode::pessimistic) {
        return until_time_set(precondition, state, now, promises) >= horizon;
    }
    return true;
}

bool is_stale(const Promise& promise, const AtomSet& state, Time now, Time grace) noexcept {
    return promise.at + grace < now && !satisfies(state, promise.literal);
}

PromiseStore usable_promises(const PromiseStore& promises,
                             const AtomSet& state,
                             Time now,
                             std::string_view own_agent,
                             Time grace) {
    PromiseStore out;
    for (const auto& p : promises.all()) {
        if (p.agent != own_agent && !is_stale(p, state, now, grace)) {
            out.add(p);
        }
    }
    return out;
}

std::vector<Promise> issue_promises(const Goal& goal, const Signature& sig, Time dispatch_time) {
    std::vector<Promise> out;
    for (const auto& tmpl : goal.op->promises) {
        const Literal ground = ground_literal(tmpl.literal, *goal.op, goal.binding);
        out.push_back(Promise{sig.lit(ground), dispatch_time + goal.op->promise_offset(tmpl), goal.id, goal.agent});
    }
    return out;
}

std::vector<TimedLit> to_tils(const PromiseStore& promises,
                              const AtomSet& state,
                              Time now,
                              std::string_view own_agent,
                              Time grace) {
    std::vector<TimedLit> out;
    for (const auto& p : promises.all()) {
        if (p.agent == own_agent || is_stale(p, state, now, grace)) {
            continue;
        }
        if (p.at > now) {
            out.push_back({p.at - now, p.literal});
        } else if (!satisfies(state, p.literal)) {
            out.push_back({1, p.literal});
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::string encode_promise(const Promise& promise, const Signature& sig) {
    return "promise " + to_string(sig.literal(promise.literal)) + " @ " + std::to_string(promise.at) + " by " +
           promise.agent + "/" + promise.goal_id;
}

std::string encode_retraction(const Retraction& retraction) {
    return "retract " + retraction.agent + "/" + retraction.goal_id;
}

namespace {

[[noreturn]] void bad_record(std::string_view record, const std::string& why) {
    throw ParseError("<record>", 1, 1, why + ": '" + std::string(record) + "'");
}

std::pair<std::string, std::string> split_owner(std::string_view record, std::string_view owner) {
    const auto slash = owner.find('/');
    if (slash == std::string_view::npos || slash == 0 || slash + 1 == owner.size()) {
        bad_record(record, "expected <agent>/<goal-id>");
    }
    return {std::string(owner.substr(0, slash)), std::string(owner.substr(slash + 1))};
}

} // namespace

PromiseRecord decode_record(std::string_view record, const Signature& sig) {
    constexpr std::string_view kPromise = "promise ";
    constexpr std::string_view kRetract = "retract ";
    if (record.substr(0, kRetract.size()) == kRetract) {
        const auto owner = record.substr(kRetract.size());
        if (owner.find(' ') != std::string_view::npos) {
            bad_record(record, "unexpected text after owner");
        }
        auto [agent, goal] = split_owner(record, owner);
        return Retraction{std::move(agent), std::move(goal)};
    }
    if (record.substr(0, kPromise.size()) != kPromise) {
        bad_record(record, "unknown record kind");
    }
    const auto at_pos = record.rfind(" @ ");
    const auto by_pos = record.rfind(" by ");
    if (at_pos == std::string_view::npos || by_pos == std::string_view::npos || by_pos < at_pos) {
        bad_record(record, "expected 'promise <literal> @ <tick> by <agent>/<goal-id>'");
    }
    const auto literal_text = record.substr(kPromise.size(), at_pos - kPromise.size());
    const auto tick_text = record.substr(at_pos + 3, by_pos - at_pos - 3);
    Time at = 0;
    auto [ptr, ec] = std::from_chars(tick_text.data(), tick_text.data() + tick_text.size(), at);
    if (ec != std::errc() || ptr != tick_text.data() + tick_text.size()) {
        bad_record(record, "bad tick");
    }
    auto [agent, goal] = split_owner(record, record.substr(by_pos + 4));
    return Promise{sig.lit(parse_literal(literal_text)), at, std::move(goal), std::move(agent)};
}

} // namespace pledge
