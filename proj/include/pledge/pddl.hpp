#pragma once

#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pledge/goal_operator.hpp"
#include "pledge/time.hpp"
#include "pledge/world.hpp"

namespace pledge {

/// Static `(= ?a ?b)` or `(not (= ?a ?b))` constraint in an action precondition.
struct EqualityConstraint {
    std::string lhs;
    std::string rhs;
    bool equal = true;
};

struct ActionSchema {
    std::string name;
    std::vector<TypedParam> params;
    std::vector<Literal> precondition;
    std::vector<EqualityConstraint> equalities;
    std::vector<Atom> adds;
    std::vector<Atom> dels;
    Time duration = 1;
};

struct PredicateDecl {
    std::string name;
    std::vector<TypedParam> params;
};

struct Domain {
    std::string name;
    std::vector<std::string> requirements;
    std::vector<std::string> types;
    std::vector<TypedParam> constants;
    std::vector<PredicateDecl> predicates;
    std::vector<ActionSchema> actions;

    const ActionSchema* find_action(std::string_view name) const;
    /// Predicates that no action adds or deletes.
    std::set<std::string> static_predicates() const;
};

struct Til {
    Time at = 0;
    Literal literal;

    auto operator<=>(const Til&) const = default;
};

struct Problem {
    std::string name;
    std::string domain;
    std::vector<TypedParam> objects;
    std::vector<Atom> init;
    std::vector<Til> tils;
    std::vector<Literal> objective;
};

struct GroundAction {
    std::string name;
    std::vector<std::string> args;
    std::vector<Lit> pre;
    std::vector<AtomId> adds;
    std::vector<AtomId> dels;
    Time duration = 1;

    /// `(name arg1 arg2)`
    std::string label() const;
    bool mentions(const std::string& object) const;
};

Domain parse_domain(std::string_view text, const std::string& source = "<domain>");
Problem parse_problem(std::string_view text, const Domain& domain, const std::string& source = "<problem>");
std::vector<GoalOperator> parse_goal_operators(std::string_view text, const std::string& source = "<goal-operators>");

/// Signature with the domain's types, predicates, and constants plus `objects`, finalized.
Signature make_signature(const Domain& domain, std::span<const TypedParam> objects);

/// Typed Cartesian grounding in lexicographic order. Bindings that violate an
/// equality constraint are pruned; with `init`, so are bindings whose static
/// preconditions are false there.
std::vector<GroundAction> ground_actions(const Domain& domain, const Signature& sig, const AtomSet* init = nullptr);
/// Size of the unpruned typed product for one schema.
std::size_t grounding_product(const ActionSchema& schema, const Signature& sig);
GroundAction ground_action(const ActionSchema& schema, const std::vector<std::string>& args, const Signature& sig);

std::string emit_problem(const Problem& problem);
Problem make_problem(const std::string& name,
                     const std::string& domain_name,
                     const Signature& sig,
                     std::span<const TypedParam> objects,
                     const AtomSet& init,
                     std::span<const Lit> objective,
                     std::span<const TimedLit> tils);

} // namespace pledge
