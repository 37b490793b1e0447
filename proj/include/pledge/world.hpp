#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pledge/time.hpp"

namespace pledge {

struct TypedParam {
    std::string name;
    std::string type;

    auto operator<=>(const TypedParam&) const = default;
};

/// Symbolic ground atom (or atom pattern when args hold `?variables`).
struct Atom {
    std::string predicate;
    std::vector<std::string> args;

    auto operator<=>(const Atom&) const = default;
};

struct Literal {
    Atom atom;
    bool positive = true;

    Literal complement() const { return Literal{atom, !positive}; }
    auto operator<=>(const Literal&) const = default;
};

std::string to_string(const Atom& atom);
std::string to_string(const Literal& literal);
Atom parse_atom(std::string_view text);
Literal parse_literal(std::string_view text);

using AtomId = std::uint32_t;

/// Interned literal.
struct Lit {
    AtomId atom = 0;
    bool positive = true;

    Lit complement() const { return Lit{atom, !positive}; }
    auto operator<=>(const Lit&) const = default;
};

/// Dense set of interned atoms.
class AtomSet {
public:
    AtomSet() = default;
    AtomSet(std::initializer_list<AtomId> ids);

    bool contains(AtomId id) const noexcept {
        const std::size_t word = id / 64;
        return word < words_.size() && ((words_[word] >> (id % 64)) & 1U) != 0;
    }
    void insert(AtomId id);
    void erase(AtomId id) noexcept;
    std::size_t size() const noexcept;
    bool empty() const noexcept { return size() == 0; }
    std::vector<AtomId> ids() const;
    std::size_t hash() const noexcept;

    friend bool operator==(const AtomSet& a, const AtomSet& b) noexcept;

private:
    void trim() noexcept;

    std::vector<std::uint64_t> words_;
};

struct AtomSetHash {
    std::size_t operator()(const AtomSet& s) const noexcept { return s.hash(); }
};

/// Types, typed objects, and predicate declarations. After `finalize()` every
/// ground atom of the signature has a stable id in lexicographic order.
class Signature {
public:
    void add_type(const std::string& type);
    void add_object(const std::string& name, const std::string& type);
    void add_predicate(const std::string& name, std::vector<std::string> arg_types);
    void finalize();

    bool finalized() const noexcept { return finalized_; }
    bool has_type(const std::string& type) const;
    bool has_object(const std::string& name) const { return object_type_.count(name) != 0; }
    bool has_predicate(const std::string& name) const { return predicates_.count(name) != 0; }
    const std::string& type_of(const std::string& object) const;
    const std::vector<std::string>& objects_of(const std::string& type) const;
    const std::vector<std::string>& types() const noexcept { return types_; }
    const std::vector<std::string>& predicate_types(const std::string& name) const;
    const std::map<std::string, std::vector<std::string>>& predicates() const noexcept { return predicates_; }
    const std::map<std::string, std::string>& objects() const noexcept { return object_type_; }

    /// Checks predicate, arity, objects, and argument types. Throws SignatureError.
    void validate(const Atom& atom) const;
    AtomId id(const Atom& atom) const;
    Lit lit(const Literal& literal) const { return Lit{id(literal.atom), literal.positive}; }
    const Atom& atom(AtomId id) const;
    Literal literal(Lit lit) const { return Literal{atom(lit.atom), lit.positive}; }
    std::size_t atom_count() const noexcept { return atoms_.size(); }

    AtomSet to_set(std::span<const Atom> atoms) const;
    std::vector<Atom> to_atoms(const AtomSet& set) const;

private:
    static std::string key(const Atom& atom);

    std::vector<std::string> types_;
    std::map<std::string, std::string> object_type_;
    std::map<std::string, std::vector<std::string>> objects_by_type_;
    std::map<std::string, std::vector<std::string>> predicates_;
    std::vector<Atom> atoms_;
    std::unordered_map<std::string, AtomId> ids_;
    bool finalized_ = false;
};

bool satisfies(const AtomSet& state, Lit literal) noexcept;
bool satisfies_all(const AtomSet& state, std::span<const Lit> literals) noexcept;
/// Symbolic variants validate the literal against the signature first.
bool satisfies(const Signature& sig, const AtomSet& state, const Literal& literal);
bool satisfies_all(const Signature& sig, const AtomSet& state, std::span<const Literal> literals);

struct TimedState {
    AtomSet atoms;
    Time time = 0;

    friend bool operator==(const TimedState&, const TimedState&) = default;
};

/// Literal that takes effect at a time (absolute or relative, by context).
struct TimedLit {
    Time at = 0;
    Lit literal;

    auto operator<=>(const TimedLit&) const = default;
};

/// (atoms \ dels) ∪ adds. Throws ContractViolation when adds and dels overlap.
AtomSet apply_effects(const AtomSet& atoms, std::span<const AtomId> adds, std::span<const AtomId> dels);
TimedState apply_effects(const TimedState& state, std::span<const AtomId> adds, std::span<const AtomId> dels);

/// One message on the shared world model. `records` carries opaque text
/// payload lines (promise and retraction records).
struct WorldUpdate {
    std::vector<AtomId> adds;
    std::vector<AtomId> dels;
    std::string origin;
    std::uint64_t seq = 0;
    std::vector<std::string> records;
};

/// Applies the effects of one update without any ordering bookkeeping.
TimedState wm_apply(const WorldUpdate& update, const TimedState& local);

enum class UpdateStatus { applied, buffered, duplicate };

struct ApplyResult {
    UpdateStatus status = UpdateStatus::applied;
    /// Updates applied by this call in (origin, seq) order, including any
    /// previously buffered successors that became deliverable.
    std::vector<WorldUpdate> applied;
};

/// An agent's replica of the shared world model. Updates from each origin are
/// applied in seq order starting at 1; gaps are buffered and duplicates ignored.
class WorldModel {
public:
    WorldModel() = default;
    explicit WorldModel(TimedState initial) : state_(std::move(initial)) {}

    ApplyResult apply(WorldUpdate update);
    void advance_to(Time now);

    const TimedState& state() const noexcept { return state_; }
    const AtomSet& atoms() const noexcept { return state_.atoms; }
    Time time() const noexcept { return state_.time; }
    std::uint64_t version() const noexcept { return version_; }
    std::uint64_t last_seq(const std::string& origin) const;
    std::size_t buffered() const noexcept;

private:
    TimedState state_;
    std::map<std::string, std::uint64_t> applied_;
    std::map<std::string, std::map<std::uint64_t, WorldUpdate>> pending_;
    std::uint64_t version_ = 0;
};

} // namespace pledge
