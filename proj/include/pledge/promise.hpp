#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pledge/goal.hpp"
#include "pledge/time.hpp"
#include "pledge/world.hpp"

namespace pledge {

/// `literal` will hold at absolute time `at`, as announced by `agent` for `goal_id`.
struct Promise {
    Lit literal;
    Time at = 0;
    std::string goal_id;
    std::string agent;

    friend bool operator==(const Promise&, const Promise&) = default;
};

class PromiseStore {
public:
    /// Returns false when an identical (literal, at, goal) entry exists.
    bool add(Promise promise);
    /// Removes every promise of the goal; returns how many were removed.
    std::size_t retract(const std::string& goal_id);

    /// Earliest promised time for exactly this literal, or kInfinity.
    Time earliest(Lit literal) const;
    /// Goals whose promise attains `earliest(literal)`.
    std::vector<std::string> earliest_sources(Lit literal) const;

    bool has_goal(const std::string& goal_id) const;
    const std::vector<Promise>& all() const noexcept { return promises_; }
    std::size_t size() const noexcept { return promises_.size(); }
    bool empty() const noexcept { return promises_.empty(); }
    std::uint64_t version() const noexcept { return version_; }

private:
    std::vector<Promise> promises_;
    std::uint64_t version_ = 0;
};

/// t if s ⊨ l; else the earliest promise for l; else kInfinity.
Time from_time(Lit literal, const AtomSet& state, Time now, const PromiseStore& promises);
/// t if s ⊨ ¬l; else the earliest promise for ¬l; else kInfinity.
Time until_time(Lit literal, const AtomSet& state, Time now, const PromiseStore& promises);
/// Max over members, which may lie in the past; `now` for an empty set.
Time from_time_set(std::span<const Lit> literals, const AtomSet& state, Time now, const PromiseStore& promises);
/// Min over members; kInfinity for an empty set.
Time until_time_set(std::span<const Lit> literals, const AtomSet& state, Time now, const PromiseStore& promises);

enum class FormulationMode { optimistic, pessimistic };

bool check_formulation(std::span<const Lit> precondition,
                       const AtomSet& state,
                       Time now,
                       const PromiseStore& promises,
                       Time lookahead,
                       FormulationMode mode = FormulationMode::optimistic);

/// A promise is stale once its time lies more than `grace` ticks in the past
/// while its literal still does not hold.
bool is_stale(const Promise& promise, const AtomSet& state, Time now, Time grace) noexcept;

/// Promises another agent may reason with: foreign and not stale.
PromiseStore usable_promises(const PromiseStore& promises,
                             const AtomSet& state,
                             Time now,
                             std::string_view own_agent,
                             Time grace);

/// One promise per operator template, ground through the goal binding.
std::vector<Promise> issue_promises(const Goal& goal, const Signature& sig, Time dispatch_time);

/// Foreign, non-stale promises as TILs relative to `now`. Promises that are
/// due but not yet realized within the grace period become TILs at 1.
std::vector<TimedLit> to_tils(const PromiseStore& promises,
                              const AtomSet& state,
                              Time now,
                              std::string_view own_agent,
                              Time grace);

struct Retraction {
    std::string agent;
    std::string goal_id;

    friend bool operator==(const Retraction&, const Retraction&) = default;
};

using PromiseRecord = std::variant<Promise, Retraction>;

/// `promise <literal> @ <tick> by <agent>/<goal-id>`
std::string encode_promise(const Promise& promise, const Signature& sig);
/// `retract <agent>/<goal-id>`
std::string encode_retraction(const Retraction& retraction);
/// Throws ParseError on malformed records.
PromiseRecord decode_record(std::string_view record, const Signature& sig);

} // namespace pledge
