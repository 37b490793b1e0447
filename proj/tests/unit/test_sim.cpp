#include "doctest.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "oracles.hpp"
#include "pledge/error.hpp"
#include "pledge/report.hpp"
#include "pledge/sim.hpp"

using namespace pledge;

namespace {

const std::string kRoot = PLEDGE_SOURCE_DIR;

std::string slurp(const std::string& relative) {
    std::ifstream in(kRoot + "/" + relative);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Scenario load(const std::string& name) {
    return load_scenario(kRoot + "/scenarios/" + name + ".json");
}

Scenario from_json(const nlohmann::json& j) {
    return parse_scenario(j.dump(), kRoot + "/scenarios", "test.json");
}

/// Index of the first event matching the predicate, or npos.
template <typename Pred>
std::size_t find(const std::vector<Event>& events, Pred pred) {
    const auto it = std::find_if(events.begin(), events.end(), pred);
    return it == events.end() ? std::string::npos : static_cast<std::size_t>(it - events.begin());
}

auto kind_label(const std::string& kind, const std::string& label_prefix) {
    return [=](const Event& e) { return e.kind == kind && e.label.rfind(label_prefix, 0) == 0; };
}

auto kind_action(const std::string& kind, const std::string& action_prefix) {
    return [=](const Event& e) { return e.kind == kind && e.action.rfind(action_prefix, 0) == 0; };
}

} // namespace

TEST_CASE("the shipped scenarios load") {
    const Scenario s = load("xenonite-3r-5c");
    CHECK(s.agents.size() == 3);
    CHECK(s.objective.size() == 5);
    CHECK(s.promises_active());
    for (const auto& name : {"s1", "s2", "s3", "s4"}) {
        CHECK_NOTHROW(load(name));
    }
}

TEST_CASE("scenario errors name their location") {
    auto j = nlohmann::json::parse(slurp("scenarios/xenonite-3r-5c.json"));
    j["durations"].erase("move");
    CHECK_THROWS_WITH_AS(from_json(j), doctest::Contains("/durations"), ConfigError);

    auto unknown = nlohmann::json::parse(slurp("scenarios/xenonite-3r-5c.json"));
    unknown["init"].push_back("(robot-at HAL BASE)");
    CHECK_THROWS(from_json(unknown));

    auto extra = nlohmann::json::parse(slurp("scenarios/xenonite-3r-5c.json"));
    extra["colour"] = "blue";
    CHECK_THROWS_AS(from_json(extra), ConfigError);
}

TEST_CASE("a lookahead override of zero disables promises") {
    Scenario s = load("xenonite-3r-5c");
    apply_options(s, RunOptions{std::nullopt, std::nullopt, 0});
    CHECK_FALSE(s.promises_active());
}

TEST_CASE("event records round-trip through jsonl") {
    const auto result = run(load("s3"));
    const std::string text = write_events(result.events);
    CHECK(read_events(text) == result.events);
    CHECK(result.events.front().kind == "run-start");
    CHECK_THROWS_AS(parse_event("{\"seq\": 1", 3), ParseError);
    for (std::size_t i = 1; i < result.events.size(); ++i) {
        CHECK(result.events[i].seq == result.events[i - 1].seq + 1);
        CHECK(result.events[i].t >= result.events[i - 1].t);
    }
}

TEST_CASE("scenario 1: one robot chains its goals") {
    const auto r = run(load("s1"));
    REQUIRE(r.objective_reached);
    const auto& ev = r.events;
    const auto start_done = find(ev, kind_label("goal-finished", "StartMachine"));
    const auto clean_formulated = find(ev, kind_label("goal-formulated", "CleanMachine"));
    REQUIRE(start_done != std::string::npos);
    REQUIRE(clean_formulated != std::string::npos);
    CHECK(start_done < clean_formulated);
    CHECK(find(ev, [](const Event& e) { return e.kind == "action-pending"; }) == std::string::npos);
    CHECK(r.end_time == 450);
}

TEST_CASE("scenario 2: the second robot is rejected, then cleans after the effects") {
    const auto r = run(load("s2"));
    REQUIRE(r.objective_reached);
    const auto& ev = r.events;
    const auto rejected = find(ev, [](const Event& e) {
        return e.kind == "goal-rejected" && e.agent == "R2D2" && e.detail == "lock denied";
    });
    const auto ready = find(ev, kind_action("world-update", "(start-machine"));
    const auto clean = find(ev, kind_label("goal-formulated", "CleanMachine"));
    REQUIRE(rejected != std::string::npos);
    REQUIRE(ready != std::string::npos);
    REQUIRE(clean != std::string::npos);
    CHECK(rejected < ready);
    CHECK(ready < clean);
}

TEST_CASE("scenario 3: CleanMachine is formulated from the promise and waits") {
    const auto r = run(load("s3"));
    REQUIRE(r.objective_reached);
    const auto& ev = r.events;
    const auto clean = find(ev, kind_label("goal-formulated", "CleanMachine"));
    const auto ready = find(ev, kind_action("world-update", "(start-machine"));
    REQUIRE(clean != std::string::npos);
    CHECK(ev[clean].promise_dependent == true);
    CHECK(clean < ready);

    const auto pending = find(ev, kind_action("action-pending", "(collect-processite"));
    const auto started = find(ev, kind_action("action-start", "(collect-processite"));
    REQUIRE(pending != std::string::npos);
    REQUIRE(started != std::string::npos);
    CHECK(ev[pending].t < ev[started].t);
    CHECK(ready < started);

    const auto handover = find(ev, [](const Event& e) { return e.kind == "lock-handover" && e.resource == "M1"; });
    REQUIRE(handover != std::string::npos);
    CHECK(handover < started);
    CHECK(r.end_time < run(load("s2")).end_time);
}

TEST_CASE("scenario 4: a withheld release makes the dependent goal time out") {
    const auto r = run(load("s4"));
    CHECK_FALSE(r.objective_reached);
    const auto& ev = r.events;
    const auto fault = find(ev, [](const Event& e) { return e.kind == "fault-injected"; });
    const auto timeout = find(ev, kind_action("action-timeout", "(collect-processite"));
    const auto failed = find(ev, kind_label("goal-failed", "CleanMachine"));
    REQUIRE(fault != std::string::npos);
    REQUIRE(timeout != std::string::npos);
    REQUIRE(failed != std::string::npos);
    CHECK(fault < timeout);
    CHECK(timeout < failed);
    CHECK(ev.back().kind == "run-timeout");
}

TEST_CASE("trace checkers pass on the scripted scenarios") {
    for (const auto& name : {"s1", "s2", "s3", "s4"}) {
        const Scenario s = load(name);
        const auto r = run(s);
        CHECK(oracle::check_locks(r.events).empty());
        CHECK(oracle::check_purity(r.events, s).empty());
        CHECK(build_report(r.events).invariant_violations == 0);
    }
}

TEST_CASE("reports and the Gantt chart come from the log alone") {
    const auto r = run(load("s3"));
    const RunReport report = build_report(r.events);
    CHECK(report.makespan == 351);
    CHECK(report.promises);
    CHECK(report.promise_stats.issued == 2);
    CHECK(report.promise_stats.used_in_formulation == 1);
    CHECK(report.promise_stats.retracted == 2);
    REQUIRE(report.goals.size() == 2);
    CHECK(build_report(read_events(write_events(r.events))) == report);

    const std::string gantt = format_gantt(report);
    CHECK(gantt.find("R2D2") != std::string::npos);
    CHECK(gantt.find('/') != std::string::npos);
    CHECK(gantt.find("CleanMachine(R2D2,M1-OUT,M1,C1,PROCESSITE)") != std::string::npos);

    const RunReport empty = build_report(std::vector<Event>{});
    CHECK(empty.goals.empty());
    CHECK_FALSE(format_gantt(empty).empty());
}

TEST_CASE("comparing runs") {
    Scenario s = load("s3");
    const RunReport treated = build_report(run(s).events);
    CHECK(compare(treated, treated).delta == 0);

    s.promises = false;
    const RunReport baseline = build_report(run(s).events);
    const Comparison c = compare(treated, baseline);
    CHECK(c.baseline_makespan == *baseline.makespan);
    CHECK(c.delta == *treated.makespan - *baseline.makespan);
    CHECK(c.delta < 0);
    CHECK_THROWS_AS(compare(baseline, baseline), Error);

    RunReport other = treated;
    other.scenario = "elsewhere";
    CHECK_THROWS_AS(compare(treated, other), Error);

    const RunReport stuck = build_report(run(load("s4")).events);
    CHECK_THROWS_AS(compare(stuck, baseline), Error);
}

TEST_CASE("sample statistics") {
    const std::vector<double> xs{2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0};
    const auto s = sample_stats(xs);
    CHECK(s.mean == doctest::Approx(5.0));
    CHECK(s.stddev == doctest::Approx(2.138089935).epsilon(1e-9));
    CHECK(sample_stats(std::vector<double>{3.0}).stddev == 0.0);
}

TEST_CASE("runs are deterministic and seeds matter") {
    Scenario s = load("xenonite-3r-5c");
    const auto a = write_events(run(s).events);
    CHECK(a == write_events(run(s).events));
    s.seed = 2;
    CHECK(a != write_events(run(s).events));
}
