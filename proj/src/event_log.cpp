#include "pledge/event_log.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pledge/error.hpp"

namespace pledge {

namespace {

using nlohmann::ordered_json;

void put(ordered_json& j, const char* key, const std::string& value) {
    if (!value.empty()) {
        j[key] = value;
    }
}

void put(ordered_json& j, const char* key, const std::vector<std::string>& values) {
    if (!values.empty()) {
        j[key] = values;
    }
}

template <typename T>
void get(const ordered_json& j, const char* key, T& out) {
    if (j.contains(key)) {
        j.at(key).get_to(out);
    }
}

template <typename T>
void get(const ordered_json& j, const char* key, std::optional<T>& out) {
    if (j.contains(key)) {
        out = j.at(key).get<T>();
    }
}

} // namespace

std::string to_jsonl(const Event& e) {
    ordered_json j;
    j["seq"] = e.seq;
    j["t"] = e.t;
    j["kind"] = e.kind;
    put(j, "agent", e.agent);
    put(j, "goal", e.goal);
    put(j, "label", e.label);
    put(j, "action", e.action);
    put(j, "resource", e.resource);
    put(j, "detail", e.detail);
    if (e.promise_dependent) {
        j["promise_dependent"] = *e.promise_dependent;
    }
    put(j, "sources", e.sources);
    put(j, "adds", e.adds);
    put(j, "dels", e.dels);
    put(j, "scenario", e.scenario);
    if (e.seed) {
        j["seed"] = *e.seed;
    }
    if (e.promises) {
        j["promises"] = *e.promises;
    }
    put(j, "agents", e.agents);
    put(j, "init", e.init);
    put(j, "objective", e.objective);
    return j.dump();
}

Event parse_event(std::string_view line, std::size_t line_number) {
    try {
        const auto j = ordered_json::parse(line);
        if (!j.is_object() || !j.contains("seq") || !j.contains("t") || !j.contains("kind")) {
            throw ParseError("<events>", line_number, 1, "record needs seq, t, and kind");
        }
        Event e;
        get(j, "seq", e.seq);
        get(j, "t", e.t);
        get(j, "kind", e.kind);
        get(j, "agent", e.agent);
        get(j, "goal", e.goal);
        get(j, "label", e.label);
        get(j, "action", e.action);
        get(j, "resource", e.resource);
        get(j, "detail", e.detail);
        get(j, "promise_dependent", e.promise_dependent);
        get(j, "sources", e.sources);
        get(j, "adds", e.adds);
        get(j, "dels", e.dels);
        get(j, "scenario", e.scenario);
        get(j, "seed", e.seed);
        get(j, "promises", e.promises);
        get(j, "agents", e.agents);
        get(j, "init", e.init);
        get(j, "objective", e.objective);
        return e;
    } catch (const ordered_json::exception& ex) {
        throw ParseError("<events>", line_number, 1, ex.what());
    }
}

std::string write_events(std::span<const Event> events) {
    std::string out;
    for (const auto& e : events) {
        out += to_jsonl(e);
        out += '\n';
    }
    return out;
}

std::vector<Event> read_events(std::string_view text) {
    std::vector<Event> events;
    std::size_t line_number = 0;
    while (!text.empty()) {
        ++line_number;
        const auto nl = text.find('\n');
        const auto line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) {
            continue;
        }
        events.push_back(parse_event(line, line_number));
    }
    return events;
}

void save_events(const std::filesystem::path& path, std::span<const Event> events) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    out << write_events(events);
}

std::vector<Event> load_events(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot read " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return read_events(ss.str());
}

} // namespace pledge
