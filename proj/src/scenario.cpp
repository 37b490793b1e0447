#include "pledge/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "pledge/error.hpp"

namespace pledge {

namespace {

using nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot read " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class Reader {
public:
    explicit Reader(std::string source) : source_(std::move(source)) {}

    [[noreturn]] void fail(const std::string& where, const std::string& message) const {
        throw ConfigError(source_ + ": " + where + ": " + message);
    }

    const json& require(const json& obj, const std::string& key, const std::string& where) const {
        if (!obj.contains(key)) {
            fail(where, "missing field '" + key + "'");
        }
        return obj.at(key);
    }

    std::string string(const json& v, const std::string& where) const {
        if (!v.is_string()) {
            fail(where, "expected a string");
        }
        return v.get<std::string>();
    }

    Time integer(const json& v, const std::string& where, Time min = 0) const {
        if (!v.is_number_integer()) {
            fail(where, "expected an integer");
        }
        const auto value = v.get<Time>();
        if (value < min) {
            fail(where, "must be at least " + std::to_string(min));
        }
        return value;
    }

    Literal literal(const Signature& sig, const json& v, const std::string& where) const {
        const auto text = string(v, where);
        try {
            Literal l = parse_literal(text);
            sig.validate(l.atom);
            return l;
        } catch (const Error& e) {
            fail(where, e.what());
        }
    }

private:
    std::string source_;
};

void check_keys(const Reader& r, const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
    for (const auto& [k, v] : obj.items()) {
        if (std::none_of(keys.begin(), keys.end(), [&](const char* known) { return k == known; })) {
            r.fail(where + "/" + k, "unknown field");
        }
    }
}

void validate_operator(const GoalOperator& op, const Signature& sig, const std::string& source) {
    const auto where = source + ": goal operator " + op.class_name;
    for (const auto& p : op.params) {
        if (!sig.has_type(p.type)) {
            throw ConfigError(where + ": unknown type '" + p.type + "'");
        }
    }
    auto check_pattern = [&](const Literal& l) {
        if (!sig.has_predicate(l.atom.predicate)) {
            throw ConfigError(where + ": unknown predicate '" + l.atom.predicate + "'");
        }
        const auto& types = sig.predicate_types(l.atom.predicate);
        if (types.size() != l.atom.args.size()) {
            throw ConfigError(where + ": wrong arity in " + to_string(l));
        }
        for (const auto& a : l.atom.args) {
            if (!is_variable(a) && !sig.has_object(a)) {
                throw ConfigError(where + ": unknown object '" + a + "' in " + to_string(l));
            }
        }
    };
    for (const auto& l : op.precondition) check_pattern(l);
    for (const auto& l : op.objective) check_pattern(l);
    for (const auto& p : op.promises) check_pattern(p.literal);
    for (const auto& res : op.resources) {
        if (!is_variable(res) && !sig.has_object(res)) {
            throw ConfigError(where + ": resource '" + res + "' is neither a parameter nor an object");
        }
    }
}

} // namespace

bool Scenario::promises_active() const {
    if (!promises) {
        return false;
    }
    return std::any_of(operators.begin(), operators.end(),
                       [&](const GoalOperator& op) { return lookahead_of(op) > 0; });
}

Scenario load_scenario(const std::filesystem::path& path) {
    return parse_scenario(read_file(path), path.parent_path(), path.string());
}

Scenario parse_scenario(std::string_view json_text, const std::filesystem::path& base_dir, const std::string& source) {
    const Reader r(source);
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(source + ": " + e.what());
    }
    if (!doc.is_object()) {
        r.fail("/", "expected an object");
    }
    check_keys(r, doc, "",
               {"name", "domain", "goal_operators", "objects", "init", "agents", "durations", "monitor", "lookahead",
                "promises", "formulation", "stale_grace", "objective", "seed", "tick_bound", "duration_jitter",
                "action_failure_probability", "latency", "faults", "selection", "planner", "locks", "comment"});

    Scenario sc;
    sc.name = r.string(r.require(doc, "name", "/"), "/name");
    sc.domain_path = r.string(r.require(doc, "domain", "/"), "/domain");
    sc.operators_path = r.string(r.require(doc, "goal_operators", "/"), "/goal_operators");
    const auto domain_file = base_dir / sc.domain_path;
    const auto operators_file = base_dir / sc.operators_path;
    sc.domain = parse_domain(read_file(domain_file), domain_file.string());
    sc.operators = parse_goal_operators(read_file(operators_file), operators_file.string());

    const auto& objects = r.require(doc, "objects", "/");
    if (!objects.is_object()) {
        r.fail("/objects", "expected a map from type to object names");
    }
    for (const auto& [type, names] : objects.items()) {
        const auto where = "/objects/" + type;
        if (!names.is_array()) {
            r.fail(where, "expected an array");
        }
        for (std::size_t i = 0; i < names.size(); ++i) {
            sc.objects.push_back({r.string(names[i], where + "/" + std::to_string(i)), type});
        }
    }
    try {
        sc.sig = make_signature(sc.domain, sc.objects);
    } catch (const Error& e) {
        r.fail("/objects", e.what());
    }
    for (const auto& op : sc.operators) {
        validate_operator(op, sc.sig, operators_file.string());
    }

    const auto& init = r.require(doc, "init", "/");
    for (std::size_t i = 0; i < init.size(); ++i) {
        const auto where = "/init/" + std::to_string(i);
        const auto l = r.literal(sc.sig, init[i], where);
        if (!l.positive) {
            r.fail(where, "initial state lists positive atoms only");
        }
        sc.init.insert(sc.sig.id(l.atom));
    }

    const auto& objective = r.require(doc, "objective", "/");
    if (!objective.is_array() || objective.empty()) {
        r.fail("/objective", "expected a nonempty array of literals");
    }
    for (std::size_t i = 0; i < objective.size(); ++i) {
        sc.objective.push_back(sc.sig.lit(r.literal(sc.sig, objective[i], "/objective/" + std::to_string(i))));
    }

    const auto& agents = r.require(doc, "agents", "/");
    if (!agents.is_array() || agents.empty()) {
        r.fail("/agents", "expected a nonempty array");
    }
    std::set<std::string> seen;
    for (std::size_t i = 0; i < agents.size(); ++i) {
        const auto where = "/agents/" + std::to_string(i);
        check_keys(r, agents[i], where, {"id", "start"});
        AgentSpec a;
        a.id = r.string(r.require(agents[i], "id", where), where + "/id");
        if (!sc.sig.has_object(a.id)) {
            r.fail(where + "/id", "unknown object '" + a.id + "'");
        }
        if (!seen.insert(a.id).second) {
            r.fail(where + "/id", "duplicate agent '" + a.id + "'");
        }
        if (agents[i].contains("start")) {
            a.start = r.integer(agents[i]["start"], where + "/start");
        }
        sc.agents.push_back(a);
    }
    std::sort(sc.agents.begin(), sc.agents.end(), [](const AgentSpec& a, const AgentSpec& b) { return a.id < b.id; });
    const auto& agent_type = sc.sig.type_of(sc.agents.front().id);
    for (const auto& a : sc.agents) {
        if (sc.sig.type_of(a.id) != agent_type) {
            r.fail("/agents", "all agents must share one type");
        }
    }
    for (const auto& op : sc.operators) {
        if (op.agent_param && op.params[op.param_index(*op.agent_param)].type != agent_type) {
            throw ConfigError(operators_file.string() + ": goal operator " + op.class_name + ": agent parameter '" +
                              *op.agent_param + "' is not of type " + agent_type);
        }
    }

    const auto& durations = r.require(doc, "durations", "/");
    if (!durations.is_object()) {
        r.fail("/durations", "expected a map from action name to ticks");
    }
    for (const auto& [name, ticks] : durations.items()) {
        if (!sc.domain.find_action(name)) {
            r.fail("/durations/" + name, "unknown action");
        }
        sc.durations[name] = r.integer(ticks, "/durations/" + name, 1);
    }
    for (auto& action : sc.domain.actions) {
        const auto it = sc.durations.find(action.name);
        if (it == sc.durations.end()) {
            r.fail("/durations", "missing duration for action '" + action.name + "'");
        }
        action.duration = it->second;
    }

    if (doc.contains("monitor")) {
        const auto& m = doc["monitor"];
        check_keys(r, m, "/monitor", {"pending_timeout", "promise_multiplier", "max_retries"});
        if (m.contains("pending_timeout")) sc.monitor.pending_timeout = r.integer(m["pending_timeout"], "/monitor/pending_timeout", 1);
        if (m.contains("promise_multiplier")) sc.monitor.promise_multiplier = r.integer(m["promise_multiplier"], "/monitor/promise_multiplier", 1);
        if (m.contains("max_retries")) sc.monitor.max_retries = static_cast<int>(r.integer(m["max_retries"], "/monitor/max_retries"));
    }
    if (doc.contains("lookahead") && !doc["lookahead"].is_null()) {
        sc.lookahead = r.integer(doc["lookahead"], "/lookahead");
    }
    if (doc.contains("promises")) {
        if (!doc["promises"].is_boolean()) {
            r.fail("/promises", "expected true or false");
        }
        sc.promises = doc["promises"].get<bool>();
    }
    if (doc.contains("formulation")) {
        const auto mode = r.string(doc["formulation"], "/formulation");
        if (mode == "optimistic") {
            sc.formulation = FormulationMode::optimistic;
        } else if (mode == "pessimistic") {
            sc.formulation = FormulationMode::pessimistic;
        } else {
            r.fail("/formulation", "expected 'optimistic' or 'pessimistic'");
        }
    }
    if (doc.contains("stale_grace")) sc.stale_grace = r.integer(doc["stale_grace"], "/stale_grace");
    if (doc.contains("seed")) sc.seed = static_cast<std::uint64_t>(r.integer(doc["seed"], "/seed"));
    if (doc.contains("tick_bound")) sc.tick_bound = r.integer(doc["tick_bound"], "/tick_bound", 1);
    if (doc.contains("duration_jitter")) sc.duration_jitter = r.integer(doc["duration_jitter"], "/duration_jitter");
    if (doc.contains("latency")) sc.latency = r.integer(doc["latency"], "/latency");
    if (doc.contains("action_failure_probability")) {
        const auto& p = doc["action_failure_probability"];
        if (!p.is_number() || p.get<double>() < 0.0 || p.get<double>() > 1.0) {
            r.fail("/action_failure_probability", "expected a number in [0, 1]");
        }
        sc.action_failure_probability = p.get<double>();
    }
    if (doc.contains("faults")) {
        const auto& faults = doc["faults"];
        for (std::size_t i = 0; i < faults.size(); ++i) {
            const auto where = "/faults/" + std::to_string(i);
            check_keys(r, faults[i], where, {"kind", "agent", "goal_class"});
            Fault f;
            f.kind = r.string(r.require(faults[i], "kind", where), where + "/kind");
            if (f.kind != "suppress-release") {
                r.fail(where + "/kind", "unknown fault '" + f.kind + "'");
            }
            f.agent = r.string(r.require(faults[i], "agent", where), where + "/agent");
            if (!seen.count(f.agent)) {
                r.fail(where + "/agent", "unknown agent '" + f.agent + "'");
            }
            f.goal_class = r.string(r.require(faults[i], "goal_class", where), where + "/goal_class");
            if (std::none_of(sc.operators.begin(), sc.operators.end(),
                             [&](const GoalOperator& op) { return op.class_name == f.goal_class; })) {
                r.fail(where + "/goal_class", "unknown goal class '" + f.goal_class + "'");
            }
            sc.faults.push_back(f);
        }
    }
    if (doc.contains("selection")) {
        const auto& s = doc["selection"];
        check_keys(r, s, "/selection", {"class_priority", "object_priority"});
        if (s.contains("class_priority")) {
            for (const auto& [k, v] : s["class_priority"].items()) {
                if (std::none_of(sc.operators.begin(), sc.operators.end(),
                                 [&](const GoalOperator& op) { return op.class_name == k; })) {
                    r.fail("/selection/class_priority/" + k, "unknown goal class");
                }
                sc.selection.class_priority[k] = static_cast<int>(r.integer(v, "/selection/class_priority/" + k, -1000000));
            }
        }
        if (s.contains("object_priority")) {
            for (const auto& [k, v] : s["object_priority"].items()) {
                if (!sc.sig.has_object(k)) {
                    r.fail("/selection/object_priority/" + k, "unknown object");
                }
                sc.selection.object_priority[k] = static_cast<int>(r.integer(v, "/selection/object_priority/" + k, -1000000));
            }
        }
    }
    if (doc.contains("planner")) {
        const auto& p = doc["planner"];
        check_keys(r, p, "/planner", {"mode", "node_budget"});
        if (p.contains("mode")) {
            const auto mode = r.string(p["mode"], "/planner/mode");
            if (mode == "uniform-cost") {
                sc.planner.mode = SearchMode::uniform_cost;
            } else if (mode == "greedy") {
                sc.planner.mode = SearchMode::greedy;
            } else {
                r.fail("/planner/mode", "expected 'uniform-cost' or 'greedy'");
            }
        }
        if (p.contains("node_budget")) {
            sc.planner.node_budget = static_cast<std::size_t>(r.integer(p["node_budget"], "/planner/node_budget", 1));
        }
    }
    if (doc.contains("locks")) {
        const auto& l = doc["locks"];
        check_keys(r, l, "/locks", {"defer_on_any_holder"});
        if (l.contains("defer_on_any_holder")) {
            sc.locks.defer_on_any_holder = l["defer_on_any_holder"].get<bool>();
        }
    }
    sc.monitor.validate();
    return sc;
}

} // namespace pledge
