#include "pledge/pddl.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>

#include "pledge/error.hpp"
#include "pledge/sexpr.hpp"

namespace pledge {

using sexpr::Node;

namespace {

const std::set<std::string> kSupportedRequirements = {
    ":strips", ":typing", ":negative-preconditions", ":equality", ":durative-actions", ":timed-initial-literals",
};

const std::set<std::string> kUnsupportedConstructs = {
    "or", "imply", "exists", "forall", "when", "increase", "decrease", "assign", "scale-up", "scale-down",
    "over", "preference", ">", "<", ">=", "<=",
};

class Context {
public:
    explicit Context(std::string source) : source_(std::move(source)) {}

    [[noreturn]] void fail(const Node& at, const std::string& message) const {
        throw ParseError(source_, at.line, at.column, message);
    }

    const Node& expect_list(const Node& n, const std::string& what) const {
        if (!n.is_list()) {
            fail(n, "expected " + what);
        }
        return n;
    }

    const std::string& expect_symbol(const Node& n, const std::string& what) const {
        if (!n.is_symbol()) {
            fail(n, "expected " + what);
        }
        return n.text;
    }

    Time expect_time(const Node& n, const std::string& what) const {
        const auto& text = expect_symbol(n, what);
        Time value = 0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc() || ptr != text.data() + text.size()) {
            fail(n, what + " must be an integer number of ticks, got '" + text + "'");
        }
        return value;
    }

    void reject_unsupported(const Node& n) const {
        if (n.is_list() && !n.head().empty()) {
            std::string head(n.head());
            std::transform(head.begin(), head.end(), head.begin(), ::tolower);
            if (kUnsupportedConstructs.count(head) != 0) {
                fail(n, "unsupported construct '" + head + "' (outside the typed STRIPS + TIL subset)");
            }
        }
    }

    const std::string& source() const noexcept { return source_; }

private:
    std::string source_;
};

/// `a b - t1 c - t2` into typed entries. Every entry must carry a type.
std::vector<TypedParam> parse_typed_list(const Context& ctx, const Node& list, std::size_t start, bool variables) {
    std::vector<TypedParam> out;
    std::vector<const Node*> pending;
    for (std::size_t i = start; i < list.items.size(); ++i) {
        const Node& item = list.items[i];
        const auto& text = ctx.expect_symbol(item, "name");
        if (text == "-") {
            if (i + 1 >= list.items.size()) {
                ctx.fail(item, "'-' must be followed by a type");
            }
            const Node& type_node = list.items[++i];
            if (type_node.is_list()) {
                ctx.fail(type_node, "unsupported construct 'either' type");
            }
            if (pending.empty()) {
                ctx.fail(item, "type without names");
            }
            for (const Node* p : pending) {
                out.push_back({p->text, type_node.text});
            }
            pending.clear();
            continue;
        }
        if (variables && !is_variable(text)) {
            ctx.fail(item, "expected variable, got '" + text + "'");
        }
        if (!variables && is_variable(text)) {
            ctx.fail(item, "unexpected variable '" + text + "'");
        }
        pending.push_back(&item);
    }
    if (!pending.empty()) {
        ctx.fail(*pending.front(), "missing type for '" + pending.front()->text + "'");
    }
    return out;
}

Atom parse_atom_node(const Context& ctx, const Node& n) {
    ctx.reject_unsupported(n);
    if (!n.is_list() || n.items.empty() || !n.items.front().is_symbol()) {
        ctx.fail(n, "expected atom");
    }
    Atom atom{n.items.front().text, {}};
    for (std::size_t i = 1; i < n.items.size(); ++i) {
        atom.args.push_back(ctx.expect_symbol(n.items[i], "atom argument"));
    }
    return atom;
}

struct ConditionSink {
    std::vector<Literal>* literals = nullptr;
    std::vector<EqualityConstraint>* equalities = nullptr;
};

void parse_condition(const Context& ctx, const Node& n, ConditionSink sink, bool durative) {
    ctx.reject_unsupported(n);
    if (!n.is_list()) {
        ctx.fail(n, "expected condition");
    }
    if (n.items.empty()) {
        return;
    }
    const Node& head = n.items.front();
    if (head.is("and")) {
        for (std::size_t i = 1; i < n.items.size(); ++i) {
            parse_condition(ctx, n.items[i], sink, durative);
        }
        return;
    }
    if (durative) {
        if (head.is("at") && n.items.size() == 3 && n.items[1].is("start")) {
            parse_condition(ctx, n.items[2], sink, false);
            return;
        }
        if (head.is("at") || head.is("over")) {
            ctx.fail(n, "unsupported condition window '" + sexpr::to_text(n).substr(0, 12) +
                            "...' (only 'at start' conditions are supported)");
        }
        ctx.fail(n, "durative condition must be wrapped in (at start ...)");
    }
    bool positive = true;
    const Node* inner = &n;
    if (head.is("not")) {
        if (n.items.size() != 2) {
            ctx.fail(n, "'not' takes exactly one argument");
        }
        positive = false;
        inner = &n.items[1];
        ctx.reject_unsupported(*inner);
    }
    if (inner->is_list() && !inner->items.empty() && inner->items.front().is("=")) {
        if (inner->items.size() != 3 || sink.equalities == nullptr) {
            ctx.fail(*inner, "equality must compare exactly two terms");
        }
        sink.equalities->push_back({ctx.expect_symbol(inner->items[1], "term"),
                                    ctx.expect_symbol(inner->items[2], "term"), positive});
        return;
    }
    sink.literals->push_back(Literal{parse_atom_node(ctx, *inner), positive});
}

void parse_effect(const Context& ctx, const Node& n, ActionSchema& action, bool durative) {
    ctx.reject_unsupported(n);
    if (!n.is_list()) {
        ctx.fail(n, "expected effect");
    }
    if (n.items.empty()) {
        return;
    }
    const Node& head = n.items.front();
    if (head.is("and")) {
        for (std::size_t i = 1; i < n.items.size(); ++i) {
            parse_effect(ctx, n.items[i], action, durative);
        }
        return;
    }
    if (durative) {
        if (head.is("at") && n.items.size() == 3 && n.items[1].is("end")) {
            parse_effect(ctx, n.items[2], action, false);
            return;
        }
        ctx.fail(n, "unsupported effect timing (only 'at end' effects are supported)");
    }
    if (head.is("not")) {
        if (n.items.size() != 2) {
            ctx.fail(n, "'not' takes exactly one argument");
        }
        action.dels.push_back(parse_atom_node(ctx, n.items[1]));
        return;
    }
    action.adds.push_back(parse_atom_node(ctx, n));
}

class DomainChecker {
public:
    DomainChecker(const Context& ctx, const Domain& d) : ctx_(ctx), domain_(d) {
        for (const auto& p : d.predicates) {
            std::vector<std::string> types;
            for (const auto& tp : p.params) {
                types.push_back(tp.type);
            }
            predicates_[p.name] = std::move(types);
        }
        for (const auto& c : d.constants) {
            constants_[c.name] = c.type;
        }
    }

    void check_type(const Node& at, const std::string& type) const {
        if (std::find(domain_.types.begin(), domain_.types.end(), type) == domain_.types.end()) {
            ctx_.fail(at, "unknown type '" + type + "'");
        }
    }

    /// Checks predicate and term types given variable types.
    void check_atom(const Node& at, const Atom& atom, const std::map<std::string, std::string>& vars) const {
        auto it = predicates_.find(atom.predicate);
        if (it == predicates_.end()) {
            ctx_.fail(at, "unknown predicate '" + atom.predicate + "'");
        }
        if (it->second.size() != atom.args.size()) {
            ctx_.fail(at, "predicate '" + atom.predicate + "' expects " + std::to_string(it->second.size()) +
                              " arguments");
        }
        for (std::size_t i = 0; i < atom.args.size(); ++i) {
            const std::string type = term_type(at, atom.args[i], vars);
            if (type != it->second[i]) {
                ctx_.fail(at, "term '" + atom.args[i] + "' has type '" + type + "' but predicate '" +
                                  atom.predicate + "' expects '" + it->second[i] + "'");
            }
        }
    }

    std::string term_type(const Node& at, const std::string& term, const std::map<std::string, std::string>& vars) const {
        if (is_variable(term)) {
            auto v = vars.find(term);
            if (v == vars.end()) {
                ctx_.fail(at, "undeclared variable '" + term + "'");
            }
            return v->second;
        }
        auto c = constants_.find(term);
        if (c == constants_.end()) {
            ctx_.fail(at, "unknown constant '" + term + "'");
        }
        return c->second;
    }

private:
    const Context& ctx_;
    const Domain& domain_;
    std::map<std::string, std::vector<std::string>> predicates_;
    std::map<std::string, std::string> constants_;
};

ActionSchema parse_action(const Context& ctx, const Node& n, bool durative) {
    if (n.items.size() < 2) {
        ctx.fail(n, "action without name");
    }
    ActionSchema action;
    action.name = ctx.expect_symbol(n.items[1], "action name");
    action.duration = 1;
    bool has_duration = false;
    for (std::size_t i = 2; i < n.items.size(); i += 2) {
        const Node& key = n.items[i];
        ctx.expect_symbol(key, "action keyword");
        if (i + 1 >= n.items.size()) {
            ctx.fail(key, "keyword '" + key.text + "' without value");
        }
        const Node& value = n.items[i + 1];
        if (key.is(":parameters")) {
            ctx.expect_list(value, "parameter list");
            action.params = parse_typed_list(ctx, value, 0, true);
        } else if (key.is(":precondition") && !durative) {
            parse_condition(ctx, value, {&action.precondition, &action.equalities}, false);
        } else if (key.is(":condition") && durative) {
            parse_condition(ctx, value, {&action.precondition, &action.equalities}, true);
        } else if (key.is(":effect")) {
            parse_effect(ctx, value, action, durative);
        } else if (key.is(":duration") && durative) {
            if (!value.is_list() || value.items.size() != 3 || !value.items[0].is("=") ||
                !value.items[1].is("?duration")) {
                ctx.fail(value, "duration must be '(= ?duration <ticks>)'");
            }
            action.duration = ctx.expect_time(value.items[2], "duration");
            has_duration = true;
        } else {
            ctx.fail(key, "unsupported action keyword '" + key.text + "'");
        }
    }
    if (durative && !has_duration) {
        ctx.fail(n, "durative action '" + action.name + "' without :duration");
    }
    if (action.duration < 1) {
        ctx.fail(n, "action '" + action.name + "' must last at least 1 tick");
    }
    return action;
}

} // namespace

const ActionSchema* Domain::find_action(std::string_view name) const {
    for (const auto& a : actions) {
        if (a.name == name) {
            return &a;
        }
    }
    return nullptr;
}

std::set<std::string> Domain::static_predicates() const {
    std::set<std::string> result;
    for (const auto& p : predicates) {
        result.insert(p.name);
    }
    for (const auto& a : actions) {
        for (const auto& e : a.adds) {
            result.erase(e.predicate);
        }
        for (const auto& e : a.dels) {
            result.erase(e.predicate);
        }
    }
    return result;
}

Domain parse_domain(std::string_view text, const std::string& source) {
    Context ctx(source);
    const Node root = sexpr::parse_one(text, source);
    if (!root.is_list() || root.items.size() < 2 || !root.items[0].is("define")) {
        ctx.fail(root, "expected '(define (domain ...) ...)'");
    }
    const Node& name_node = root.items[1];
    if (!name_node.is_list() || name_node.items.size() != 2 || !name_node.items[0].is("domain")) {
        ctx.fail(name_node, "expected '(domain <name>)'");
    }
    Domain domain;
    domain.name = ctx.expect_symbol(name_node.items[1], "domain name");

    std::vector<std::pair<const Node*, bool>> action_nodes;
    for (std::size_t i = 2; i < root.items.size(); ++i) {
        const Node& section = root.items[i];
        ctx.expect_list(section, "domain section");
        const auto head = section.head();
        if (sexpr::iequals(head, ":requirements")) {
            for (std::size_t k = 1; k < section.items.size(); ++k) {
                std::string req = ctx.expect_symbol(section.items[k], "requirement");
                std::transform(req.begin(), req.end(), req.begin(), ::tolower);
                if (kSupportedRequirements.count(req) == 0) {
                    ctx.fail(section.items[k], "unsupported requirement '" + req + "'");
                }
                domain.requirements.push_back(req);
            }
        } else if (sexpr::iequals(head, ":types")) {
            std::vector<std::string> names;
            for (std::size_t k = 1; k < section.items.size(); ++k) {
                const auto& t = ctx.expect_symbol(section.items[k], "type name");
                if (t == "-") {
                    if (k + 1 >= section.items.size() || !section.items[k + 1].is("object")) {
                        ctx.fail(section.items[k], "unsupported construct: subtyping (only '- object' is allowed)");
                    }
                    ++k;
                    continue;
                }
                names.push_back(t);
            }
            for (const auto& t : names) {
                if (std::find(domain.types.begin(), domain.types.end(), t) != domain.types.end()) {
                    ctx.fail(section, "duplicate type '" + t + "'");
                }
                domain.types.push_back(t);
            }
        } else if (sexpr::iequals(head, ":constants")) {
            auto constants = parse_typed_list(ctx, section, 1, false);
            domain.constants.insert(domain.constants.end(), constants.begin(), constants.end());
        } else if (sexpr::iequals(head, ":predicates")) {
            for (std::size_t k = 1; k < section.items.size(); ++k) {
                const Node& p = section.items[k];
                if (!p.is_list() || p.items.empty() || !p.items[0].is_symbol()) {
                    ctx.fail(p, "expected predicate declaration");
                }
                PredicateDecl decl{p.items[0].text, parse_typed_list(ctx, p, 1, true)};
                for (const auto& existing : domain.predicates) {
                    if (existing.name == decl.name) {
                        ctx.fail(p, "duplicate predicate '" + decl.name + "'");
                    }
                }
                domain.predicates.push_back(std::move(decl));
            }
        } else if (sexpr::iequals(head, ":action")) {
            action_nodes.emplace_back(&section, false);
        } else if (sexpr::iequals(head, ":durative-action")) {
            action_nodes.emplace_back(&section, true);
        } else {
            ctx.fail(section, "unsupported domain section '" + std::string(head) + "'");
        }
    }

    DomainChecker checker(ctx, domain);
    for (const auto& c : domain.constants) {
        checker.check_type(root, c.type);
    }
    for (std::size_t k = 0; k < domain.predicates.size(); ++k) {
        for (const auto& tp : domain.predicates[k].params) {
            checker.check_type(root, tp.type);
        }
    }
    for (const auto& [node, durative] : action_nodes) {
        ActionSchema action = parse_action(ctx, *node, durative);
        if (domain.find_action(action.name) != nullptr) {
            ctx.fail(*node, "duplicate action '" + action.name + "'");
        }
        std::map<std::string, std::string> vars;
        for (const auto& p : action.params) {
            checker.check_type(*node, p.type);
            if (!vars.emplace(p.name, p.type).second) {
                ctx.fail(*node, "duplicate parameter '" + p.name + "' in action '" + action.name + "'");
            }
        }
        for (const auto& l : action.precondition) {
            checker.check_atom(*node, l.atom, vars);
        }
        for (const auto& a : action.adds) {
            checker.check_atom(*node, a, vars);
        }
        for (const auto& a : action.dels) {
            checker.check_atom(*node, a, vars);
        }
        for (const auto& e : action.equalities) {
            checker.term_type(*node, e.lhs, vars);
            checker.term_type(*node, e.rhs, vars);
        }
        domain.actions.push_back(std::move(action));
    }
    return domain;
}

Problem parse_problem(std::string_view text, const Domain& domain, const std::string& source) {
    Context ctx(source);
    const Node root = sexpr::parse_one(text, source);
    if (!root.is_list() || root.items.size() < 2 || !root.items[0].is("define")) {
        ctx.fail(root, "expected '(define (problem ...) ...)'");
    }
    const Node& name_node = root.items[1];
    if (!name_node.is_list() || name_node.items.size() != 2 || !name_node.items[0].is("problem")) {
        ctx.fail(name_node, "expected '(problem <name>)'");
    }
    Problem problem;
    problem.name = ctx.expect_symbol(name_node.items[1], "problem name");
    problem.domain = domain.name;

    std::vector<std::pair<const Node*, Atom>> init_atoms;
    std::vector<std::pair<const Node*, Til>> tils;
    std::vector<std::pair<const Node*, Literal>> goal;
    for (std::size_t i = 2; i < root.items.size(); ++i) {
        const Node& section = root.items[i];
        ctx.expect_list(section, "problem section");
        const auto head = section.head();
        if (sexpr::iequals(head, ":domain")) {
            if (section.items.size() != 2 || ctx.expect_symbol(section.items[1], "domain name") != domain.name) {
                ctx.fail(section, "problem refers to a different domain");
            }
        } else if (sexpr::iequals(head, ":objects")) {
            auto objs = parse_typed_list(ctx, section, 1, false);
            problem.objects.insert(problem.objects.end(), objs.begin(), objs.end());
        } else if (sexpr::iequals(head, ":init")) {
            for (std::size_t k = 1; k < section.items.size(); ++k) {
                const Node& item = section.items[k];
                ctx.reject_unsupported(item);
                if (item.is_list() && item.items.size() == 3 && item.items[0].is("at") && item.items[1].is_symbol() &&
                    item.items[2].is_list()) {
                    const Time at = ctx.expect_time(item.items[1], "timed initial literal time");
                    if (at <= 0) {
                        ctx.fail(item, "timed initial literal time must be positive");
                    }
                    const Node& lit = item.items[2];
                    Literal literal;
                    if (!lit.items.empty() && lit.items[0].is("not")) {
                        if (lit.items.size() != 2) {
                            ctx.fail(lit, "'not' takes exactly one argument");
                        }
                        literal = Literal{parse_atom_node(ctx, lit.items[1]), false};
                    } else {
                        literal = Literal{parse_atom_node(ctx, lit), true};
                    }
                    tils.emplace_back(&item, Til{at, std::move(literal)});
                } else if (item.is_list() && !item.items.empty() && item.items[0].is("not")) {
                    ctx.fail(item, "initial state may only contain positive atoms");
                } else if (item.is_list() && !item.items.empty() && item.items[0].is("=")) {
                    ctx.fail(item, "unsupported construct: numeric fluent initialisation");
                } else {
                    init_atoms.emplace_back(&item, parse_atom_node(ctx, item));
                }
            }
        } else if (sexpr::iequals(head, ":goal")) {
            if (section.items.size() != 2) {
                ctx.fail(section, "expected a single goal condition");
            }
            std::vector<Literal> literals;
            std::vector<EqualityConstraint> eq;
            parse_condition(ctx, section.items[1], {&literals, &eq}, false);
            if (!eq.empty()) {
                ctx.fail(section, "equality is not allowed in goals");
            }
            for (auto& l : literals) {
                goal.emplace_back(&section, std::move(l));
            }
        } else {
            ctx.fail(section, "unsupported problem section '" + std::string(head) + "'");
        }
    }

    Signature sig;
    try {
        sig = make_signature(domain, problem.objects);
    } catch (const SignatureError& e) {
        ctx.fail(root, e.what());
    }
    auto check = [&](const Node* at, const Atom& atom) {
        try {
            sig.validate(atom);
        } catch (const SignatureError& e) {
            ctx.fail(*at, e.what());
        }
    };
    for (auto& [node, atom] : init_atoms) {
        check(node, atom);
        problem.init.push_back(std::move(atom));
    }
    for (auto& [node, til] : tils) {
        check(node, til.literal.atom);
        problem.tils.push_back(std::move(til));
    }
    std::stable_sort(problem.tils.begin(), problem.tils.end(),
                     [](const Til& a, const Til& b) { return a.at < b.at; });
    for (auto& [node, literal] : goal) {
        check(node, literal.atom);
        problem.objective.push_back(std::move(literal));
    }
    return problem;
}

Signature make_signature(const Domain& domain, std::span<const TypedParam> objects) {
    Signature sig;
    for (const auto& t : domain.types) {
        sig.add_type(t);
    }
    for (const auto& c : domain.constants) {
        sig.add_object(c.name, c.type);
    }
    for (const auto& o : objects) {
        sig.add_object(o.name, o.type);
    }
    for (const auto& p : domain.predicates) {
        std::vector<std::string> types;
        for (const auto& tp : p.params) {
            types.push_back(tp.type);
        }
        sig.add_predicate(p.name, std::move(types));
    }
    sig.finalize();
    return sig;
}

std::string GroundAction::label() const {
    std::string out = "(" + name;
    for (const auto& a : args) {
        out += ' ';
        out += a;
    }
    out += ')';
    return out;
}

bool GroundAction::mentions(const std::string& object) const {
    return std::find(args.begin(), args.end(), object) != args.end();
}

namespace {

std::string substitute(const std::string& term, const ActionSchema& schema, const std::vector<std::string>& args) {
    if (!is_variable(term)) {
        return term;
    }
    for (std::size_t i = 0; i < schema.params.size(); ++i) {
        if (schema.params[i].name == term) {
            return args[i];
        }
    }
    throw SignatureError("undeclared variable '" + term + "' in action '" + schema.name + "'");
}

Atom substitute(const Atom& pattern, const ActionSchema& schema, const std::vector<std::string>& args) {
    Atom out{pattern.predicate, {}};
    for (const auto& a : pattern.args) {
        out.args.push_back(substitute(a, schema, args));
    }
    return out;
}

} // namespace

GroundAction ground_action(const ActionSchema& schema, const std::vector<std::string>& args, const Signature& sig) {
    if (args.size() != schema.params.size()) {
        throw SignatureError("action '" + schema.name + "' expects " + std::to_string(schema.params.size()) +
                             " arguments");
    }
    GroundAction g;
    g.name = schema.name;
    g.args = args;
    g.duration = schema.duration;
    for (const auto& l : schema.precondition) {
        g.pre.push_back(sig.lit(Literal{substitute(l.atom, schema, args), l.positive}));
    }
    for (const auto& a : schema.adds) {
        g.adds.push_back(sig.id(substitute(a, schema, args)));
    }
    std::sort(g.adds.begin(), g.adds.end());
    g.adds.erase(std::unique(g.adds.begin(), g.adds.end()), g.adds.end());
    for (const auto& d : schema.dels) {
        const AtomId id = sig.id(substitute(d, schema, args));
        // Add-after-delete: an atom both deleted and added stays true.
        if (!std::binary_search(g.adds.begin(), g.adds.end(), id)) {
            g.dels.push_back(id);
        }
    }
    std::sort(g.dels.begin(), g.dels.end());
    g.dels.erase(std::unique(g.dels.begin(), g.dels.end()), g.dels.end());
    return g;
}

std::size_t grounding_product(const ActionSchema& schema, const Signature& sig) {
    std::size_t n = 1;
    for (const auto& p : schema.params) {
        n *= sig.objects_of(p.type).size();
    }
    return n;
}

std::vector<GroundAction> ground_actions(const Domain& domain, const Signature& sig, const AtomSet* init) {
    const auto statics = domain.static_predicates();
    std::vector<GroundAction> out;
    for (const auto& schema : domain.actions) {
        std::vector<const std::vector<std::string>*> domains;
        bool empty = false;
        for (const auto& p : schema.params) {
            domains.push_back(&sig.objects_of(p.type));
            empty = empty || domains.back()->empty();
        }
        if (empty) {
            continue;
        }
        std::vector<std::size_t> index(domains.size(), 0);
        std::vector<std::string> args(domains.size());
        for (;;) {
            for (std::size_t i = 0; i < domains.size(); ++i) {
                args[i] = (*domains[i])[index[i]];
            }
            bool keep = true;
            for (const auto& eq : schema.equalities) {
                if ((substitute(eq.lhs, schema, args) == substitute(eq.rhs, schema, args)) != eq.equal) {
                    keep = false;
                    break;
                }
            }
            if (keep && init != nullptr) {
                for (const auto& l : schema.precondition) {
                    if (statics.count(l.atom.predicate) != 0 &&
                        !satisfies(*init, sig.lit(Literal{substitute(l.atom, schema, args), l.positive}))) {
                        keep = false;
                        break;
                    }
                }
            }
            if (keep) {
                out.push_back(ground_action(schema, args, sig));
            }
            bool done = true;
            for (std::size_t pos = domains.size(); pos > 0;) {
                --pos;
                if (++index[pos] < domains[pos]->size()) {
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
    return out;
}

std::string emit_problem(const Problem& problem) {
    std::ostringstream out;
    out << "(define (problem " << problem.name << ")\n";
    out << "  (:domain " << problem.domain << ")\n";
    std::map<std::string, std::vector<std::string>> by_type;
    for (const auto& o : problem.objects) {
        by_type[o.type].push_back(o.name);
    }
    out << "  (:objects";
    for (auto& [type, names] : by_type) {
        std::sort(names.begin(), names.end());
        out << "\n   ";
        for (const auto& n : names) {
            out << ' ' << n;
        }
        out << " - " << type;
    }
    out << ")\n";
    out << "  (:init";
    for (const auto& a : problem.init) {
        out << "\n    " << to_string(a);
    }
    for (const auto& til : problem.tils) {
        out << "\n    (at " << til.at << ' ' << to_string(til.literal) << ')';
    }
    out << ")\n";
    out << "  (:goal (and";
    for (const auto& l : problem.objective) {
        out << ' ' << to_string(l);
    }
    out << "))\n)\n";
    return out.str();
}

Problem make_problem(const std::string& name,
                     const std::string& domain_name,
                     const Signature& sig,
                     std::span<const TypedParam> objects,
                     const AtomSet& init,
                     std::span<const Lit> objective,
                     std::span<const TimedLit> tils) {
    Problem p;
    p.name = name;
    p.domain = domain_name;
    p.objects.assign(objects.begin(), objects.end());
    p.init = sig.to_atoms(init);
    for (const auto& t : tils) {
        p.tils.push_back(Til{t.at, sig.literal(t.literal)});
    }
    std::stable_sort(p.tils.begin(), p.tils.end(), [](const Til& a, const Til& b) { return a.at < b.at; });
    for (const auto& l : objective) {
        p.objective.push_back(sig.literal(l));
    }
    return p;
}

namespace {

std::vector<Literal> parse_literal_block(const Context& ctx, const Node& value) {
    std::vector<Literal> literals;
    std::vector<EqualityConstraint> eq;
    if (value.is_string()) {
        const Node inner = sexpr::parse_one(value.text, ctx.source(), value.line, value.column + 1);
        parse_condition(ctx, inner, {&literals, &eq}, false);
    } else {
        parse_condition(ctx, value, {&literals, &eq}, false);
    }
    if (!eq.empty()) {
        ctx.fail(value, "equality is not supported in goal-operator conditions");
    }
    return literals;
}

Literal parse_single_literal(const Context& ctx, const Node& n) {
    std::vector<Literal> literals;
    std::vector<EqualityConstraint> eq;
    parse_condition(ctx, n, {&literals, &eq}, false);
    if (literals.size() != 1 || !eq.empty()) {
        ctx.fail(n, "expected a single literal");
    }
    return literals.front();
}

GoalOperator parse_goal_operator(const Context& ctx, const Node& n) {
    GoalOperator op;
    std::vector<std::string> names;
    std::vector<std::string> types;
    const Node* names_node = &n;
    bool has_est = false;
    for (std::size_t i = 1; i < n.items.size(); ++i) {
        const Node& field = n.items[i];
        if (!field.is_list() || field.items.empty() || !field.items[0].is_symbol()) {
            ctx.fail(field, "expected '(field value...)'");
        }
        const auto& key = field.items[0];
        auto symbols = [&](std::size_t from) {
            std::vector<std::string> out;
            for (std::size_t k = from; k < field.items.size(); ++k) {
                out.push_back(ctx.expect_symbol(field.items[k], "symbol"));
            }
            return out;
        };
        auto single = [&]() -> const Node& {
            if (field.items.size() != 2) {
                ctx.fail(field, "field '" + key.text + "' takes exactly one value");
            }
            return field.items[1];
        };
        if (key.is("class")) {
            op.class_name = ctx.expect_symbol(single(), "class name");
        } else if (key.is("param-names")) {
            names = symbols(1);
            names_node = &field;
        } else if (key.is("param-types")) {
            types = symbols(1);
        } else if (key.is("param-quantified")) {
            if (field.items.size() > 1) {
                ctx.fail(field, "unsupported feature: quantified goal parameters");
            }
        } else if (key.is("lookahead-time")) {
            op.lookahead = ctx.expect_time(single(), "lookahead-time");
        } else if (key.is("preconditions")) {
            op.precondition = parse_literal_block(ctx, single());
        } else if (key.is("objective")) {
            op.objective = parse_literal_block(ctx, single());
        } else if (key.is("promises")) {
            for (std::size_t k = 1; k < field.items.size(); ++k) {
                const Node& item = field.items[k];
                if (item.is_list() && item.items.size() == 3 && item.items[0].is("at") && item.items[1].is_symbol()) {
                    op.promises.push_back({parse_single_literal(ctx, item.items[2]),
                                           ctx.expect_time(item.items[1], "promise offset")});
                } else {
                    op.promises.push_back({parse_single_literal(ctx, item), std::nullopt});
                }
            }
        } else if (key.is("est-duration")) {
            op.est_duration = ctx.expect_time(single(), "est-duration");
            has_est = true;
        } else if (key.is("resources")) {
            op.resources = symbols(1);
        } else if (key.is("priority")) {
            op.priority = static_cast<int>(ctx.expect_time(single(), "priority"));
        } else if (key.is("agent-param")) {
            op.agent_param = ctx.expect_symbol(single(), "parameter name");
        } else {
            ctx.fail(field, "unknown goal-operator field '" + key.text + "'");
        }
    }
    if (op.class_name.empty()) {
        ctx.fail(n, "goal operator without (class ...)");
    }
    if (names.size() != types.size()) {
        ctx.fail(*names_node, "param-names and param-types differ in length");
    }
    if (!has_est) {
        ctx.fail(n, "goal operator " + op.class_name + " is missing required field est-duration");
    }
    for (std::size_t k = 0; k < names.size(); ++k) {
        op.params.push_back({names[k], types[k]});
    }
    try {
        op.validate();
    } catch (const ConfigError& e) {
        ctx.fail(n, e.what());
    }
    return op;
}

} // namespace

std::vector<GoalOperator> parse_goal_operators(std::string_view text, const std::string& source) {
    Context ctx(source);
    std::vector<GoalOperator> ops;
    for (const Node& n : sexpr::parse_all(text, source)) {
        if (!n.is_list() || n.items.empty() || !n.items[0].is("goal-operator")) {
            ctx.fail(n, "expected '(goal-operator ...)'");
        }
        GoalOperator op = parse_goal_operator(ctx, n);
        for (const auto& existing : ops) {
            if (existing.class_name == op.class_name) {
                ctx.fail(n, "duplicate goal class '" + op.class_name + "'");
            }
        }
        ops.push_back(std::move(op));
    }
    return ops;
}

} // namespace pledge
