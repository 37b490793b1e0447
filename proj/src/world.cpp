#include "pledge/world.hpp"

#include <algorithm>
#include <bit>

#include "pledge/error.hpp"
#include "pledge/sexpr.hpp"

namespace pledge {

std::string to_string(const Atom& atom) {
    std::string out = "(" + atom.predicate;
    for (const auto& arg : atom.args) {
        out += ' ';
        out += arg;
    }
    out += ')';
    return out;
}

std::string to_string(const Literal& literal) {
    return literal.positive ? to_string(literal.atom) : "(not " + to_string(literal.atom) + ")";
}

namespace {

Atom atom_from_node(const sexpr::Node& node, const std::string& source) {
    if (!node.is_list() || node.items.empty() || !node.items.front().is_symbol()) {
        throw ParseError(source, node.line, node.column, "expected atom '(predicate args...)'");
    }
    Atom atom;
    atom.predicate = node.items.front().text;
    for (std::size_t i = 1; i < node.items.size(); ++i) {
        const auto& arg = node.items[i];
        if (!arg.is_symbol()) {
            throw ParseError(source, arg.line, arg.column, "atom arguments must be symbols");
        }
        atom.args.push_back(arg.text);
    }
    return atom;
}

} // namespace

Atom parse_atom(std::string_view text) {
    const std::string source = "<atom>";
    return atom_from_node(sexpr::parse_one(text, source), source);
}

Literal parse_literal(std::string_view text) {
    const std::string source = "<literal>";
    const auto node = sexpr::parse_one(text, source);
    if (node.is_list() && node.items.size() == 2 && node.items.front().is("not")) {
        return Literal{atom_from_node(node.items[1], source), false};
    }
    return Literal{atom_from_node(node, source), true};
}

AtomSet::AtomSet(std::initializer_list<AtomId> ids) {
    for (AtomId id : ids) {
        insert(id);
    }
}

void AtomSet::insert(AtomId id) {
    const std::size_t word = id / 64;
    if (word >= words_.size()) {
        words_.resize(word + 1, 0);
    }
    words_[word] |= std::uint64_t{1} << (id % 64);
}

void AtomSet::erase(AtomId id) noexcept {
    const std::size_t word = id / 64;
    if (word < words_.size()) {
        words_[word] &= ~(std::uint64_t{1} << (id % 64));
        trim();
    }
}

void AtomSet::trim() noexcept {
    while (!words_.empty() && words_.back() == 0) {
        words_.pop_back();
    }
}

std::size_t AtomSet::size() const noexcept {
    std::size_t n = 0;
    for (auto w : words_) {
        n += static_cast<std::size_t>(std::popcount(w));
    }
    return n;
}

std::vector<AtomId> AtomSet::ids() const {
    std::vector<AtomId> out;
    for (std::size_t w = 0; w < words_.size(); ++w) {
        std::uint64_t bits = words_[w];
        while (bits != 0) {
            const int bit = std::countr_zero(bits);
            out.push_back(static_cast<AtomId>(w * 64 + static_cast<std::size_t>(bit)));
            bits &= bits - 1;
        }
    }
    return out;
}

std::size_t AtomSet::hash() const noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (auto w : words_) {
        h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
}

bool operator==(const AtomSet& a, const AtomSet& b) noexcept {
    return a.words_ == b.words_;
}

void Signature::add_type(const std::string& type) {
    if (finalized_) {
        throw ContractViolation("signature already finalized");
    }
    if (!has_type(type)) {
        types_.push_back(type);
        objects_by_type_[type];
    }
}

bool Signature::has_type(const std::string& type) const {
    return std::find(types_.begin(), types_.end(), type) != types_.end();
}

void Signature::add_object(const std::string& name, const std::string& type) {
    if (finalized_) {
        throw ContractViolation("signature already finalized");
    }
    if (!has_type(type)) {
        throw SignatureError("object '" + name + "' has unknown type '" + type + "'");
    }
    auto it = object_type_.find(name);
    if (it != object_type_.end()) {
        if (it->second != type) {
            throw SignatureError("object '" + name + "' declared with types '" + it->second + "' and '" + type + "'");
        }
        return;
    }
    object_type_.emplace(name, type);
    auto& list = objects_by_type_[type];
    list.insert(std::upper_bound(list.begin(), list.end(), name), name);
}

void Signature::add_predicate(const std::string& name, std::vector<std::string> arg_types) {
    if (finalized_) {
        throw ContractViolation("signature already finalized");
    }
    for (const auto& t : arg_types) {
        if (!has_type(t)) {
            throw SignatureError("predicate '" + name + "' uses unknown type '" + t + "'");
        }
    }
    if (!predicates_.emplace(name, std::move(arg_types)).second) {
        throw SignatureError("duplicate predicate '" + name + "'");
    }
}

void Signature::finalize() {
    if (finalized_) {
        return;
    }
    for (const auto& [name, arg_types] : predicates_) {
        std::vector<std::size_t> index(arg_types.size(), 0);
        bool empty_domain = false;
        for (const auto& t : arg_types) {
            empty_domain = empty_domain || objects_by_type_[t].empty();
        }
        if (empty_domain) {
            continue;
        }
        for (;;) {
            Atom atom{name, {}};
            for (std::size_t i = 0; i < arg_types.size(); ++i) {
                atom.args.push_back(objects_by_type_[arg_types[i]][index[i]]);
            }
            ids_.emplace(key(atom), static_cast<AtomId>(atoms_.size()));
            atoms_.push_back(std::move(atom));
            bool done = true;
            for (std::size_t pos = arg_types.size(); pos > 0;) {
                --pos;
                if (++index[pos] < objects_by_type_[arg_types[pos]].size()) {
                    done = false;
                    break;
                }
                index[pos] = 0;
            }
            if (done) {
                break;
            }
        }
    }
    finalized_ = true;
}

const std::string& Signature::type_of(const std::string& object) const {
    auto it = object_type_.find(object);
    if (it == object_type_.end()) {
        throw SignatureError("unknown object '" + object + "'");
    }
    return it->second;
}

const std::vector<std::string>& Signature::objects_of(const std::string& type) const {
    auto it = objects_by_type_.find(type);
    if (it == objects_by_type_.end()) {
        throw SignatureError("unknown type '" + type + "'");
    }
    return it->second;
}

const std::vector<std::string>& Signature::predicate_types(const std::string& name) const {
    auto it = predicates_.find(name);
    if (it == predicates_.end()) {
        throw SignatureError("unknown predicate '" + name + "'");
    }
    return it->second;
}

void Signature::validate(const Atom& atom) const {
    const auto& arg_types = predicate_types(atom.predicate);
    if (arg_types.size() != atom.args.size()) {
        throw SignatureError("predicate '" + atom.predicate + "' expects " + std::to_string(arg_types.size()) +
                             " arguments, got " + std::to_string(atom.args.size()) + " in " + to_string(atom));
    }
    for (std::size_t i = 0; i < arg_types.size(); ++i) {
        const auto& type = type_of(atom.args[i]);
        if (type != arg_types[i]) {
            throw SignatureError("argument '" + atom.args[i] + "' of " + to_string(atom) + " has type '" + type +
                                 "', expected '" + arg_types[i] + "'");
        }
    }
}

std::string Signature::key(const Atom& atom) {
    std::string k = atom.predicate;
    for (const auto& a : atom.args) {
        k += '\x1f';
        k += a;
    }
    return k;
}

AtomId Signature::id(const Atom& atom) const {
    if (!finalized_) {
        throw ContractViolation("signature not finalized");
    }
    auto it = ids_.find(key(atom));
    if (it == ids_.end()) {
        validate(atom);
        throw SignatureError("atom " + to_string(atom) + " is not part of the signature");
    }
    return it->second;
}

const Atom& Signature::atom(AtomId id) const {
    if (id >= atoms_.size()) {
        throw SignatureError("atom id " + std::to_string(id) + " out of range");
    }
    return atoms_[id];
}

AtomSet Signature::to_set(std::span<const Atom> atoms) const {
    AtomSet set;
    for (const auto& a : atoms) {
        set.insert(id(a));
    }
    return set;
}

std::vector<Atom> Signature::to_atoms(const AtomSet& set) const {
    std::vector<Atom> out;
    for (AtomId id : set.ids()) {
        out.push_back(atom(id));
    }
    return out;
}

bool satisfies(const AtomSet& state, Lit literal) noexcept {
    return state.contains(literal.atom) == literal.positive;
}

bool satisfies_all(const AtomSet& state, std::span<const Lit> literals) noexcept {
    return std::all_of(literals.begin(), literals.end(), [&](Lit l) { return satisfies(state, l); });
}

bool satisfies(const Signature& sig, const AtomSet& state, const Literal& literal) {
    return satisfies(state, sig.lit(literal));
}

bool satisfies_all(const Signature& sig, const AtomSet& state, std::span<const Literal> literals) {
    bool all = true;
    for (const auto& l : literals) {
        // Resolve every literal so malformed ones are reported even after a false one.
        all = satisfies(sig, state, l) && all;
    }
    return all;
}

AtomSet apply_effects(const AtomSet& atoms, std::span<const AtomId> adds, std::span<const AtomId> dels) {
    for (AtomId a : adds) {
        if (std::find(dels.begin(), dels.end(), a) != dels.end()) {
            throw ContractViolation("atom " + std::to_string(a) + " is both added and deleted");
        }
    }
    AtomSet out = atoms;
    for (AtomId d : dels) {
        out.erase(d);
    }
    for (AtomId a : adds) {
        out.insert(a);
    }
    return out;
}

TimedState apply_effects(const TimedState& state, std::span<const AtomId> adds, std::span<const AtomId> dels) {
    return TimedState{apply_effects(state.atoms, adds, dels), state.time};
}

TimedState wm_apply(const WorldUpdate& update, const TimedState& local) {
    return apply_effects(local, update.adds, update.dels);
}

ApplyResult WorldModel::apply(WorldUpdate update) {
    ApplyResult result;
    auto& last = applied_[update.origin];
    if (update.seq <= last) {
        result.status = UpdateStatus::duplicate;
        return result;
    }
    auto& pending = pending_[update.origin];
    if (update.seq > last + 1) {
        result.status = pending.count(update.seq) != 0 ? UpdateStatus::duplicate : UpdateStatus::buffered;
        pending.emplace(update.seq, std::move(update));
        return result;
    }
    result.status = UpdateStatus::applied;
    const std::string origin = update.origin;
    state_ = wm_apply(update, state_);
    last = update.seq;
    ++version_;
    result.applied.push_back(std::move(update));
    for (auto it = pending.find(last + 1); it != pending.end(); it = pending.find(last + 1)) {
        state_ = wm_apply(it->second, state_);
        last = it->first;
        ++version_;
        result.applied.push_back(std::move(it->second));
        pending.erase(it);
    }
    return result;
}

void WorldModel::advance_to(Time now) {
    if (now < state_.time) {
        throw ContractViolation("world time must not decrease");
    }
    state_.time = now;
}

std::uint64_t WorldModel::last_seq(const std::string& origin) const {
    auto it = applied_.find(origin);
    return it == applied_.end() ? 0 : it->second;
}

std::size_t WorldModel::buffered() const noexcept {
    std::size_t n = 0;
    for (const auto& [origin, m] : pending_) {
        n += m.size();
    }
    return n;
}

} // namespace pledge
