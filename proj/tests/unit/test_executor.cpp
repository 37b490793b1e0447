#include "doctest.h"

#include "pledge/error.hpp"
#include "pledge/executor.hpp"

using namespace pledge;

namespace {

constexpr AtomId FILLED = 0;
constexpr AtomId READY = 1;
constexpr AtomId HERE = 2;

GroundAction act(std::string name, std::vector<Lit> pre, std::vector<AtomId> adds, std::vector<AtomId> dels, Time d) {
    GroundAction g;
    g.name = std::move(name);
    g.pre = std::move(pre);
    g.adds = std::move(adds);
    g.dels = std::move(dels);
    g.duration = d;
    return g;
}

Plan two_steps() {
    Plan p;
    p.steps.push_back({0, act("move", {}, {HERE}, {}, 10)});
    p.steps.push_back({10, act("collect", {{HERE, true}, {READY, true}}, {}, {READY}, 5)});
    return p;
}

} // namespace

TEST_CASE("monitor configuration") {
    MonitorConfig cfg;
    CHECK(cfg.effective_timeout(false) == 300);
    CHECK(cfg.effective_timeout(true) == 600);
    CHECK(cfg.effective_timeout(true) >= cfg.effective_timeout(false));
    cfg.pending_timeout = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("an action whose precondition holds starts at once") {
    AtomSet world;
    ExecutionState exec("g", two_steps(), false);
    const auto r = tick(exec, ExecContext{&world, 0, {}, {}}, MonitorConfig{});
    REQUIRE(r.events.size() == 1);
    CHECK(r.events[0].kind == ExecEventKind::action_start);
    CHECK(exec.current->phase == Phase::running);
    CHECK(exec.current->ends_at == 10);
    CHECK_FALSE(completion_due(exec, 9));
    CHECK(completion_due(exec, 10));
    CHECK_THROWS_AS(complete_action(exec, 9, MonitorConfig{}), ContractViolation);

    const auto done = complete_action(exec, 10, MonitorConfig{});
    CHECK(done.status == ExecStatus::active);
    CHECK(exec.cursor == 1);
    REQUIRE(done.update.has_value());
    CHECK(done.update->adds == std::vector<AtomId>{HERE});
}

TEST_CASE("an action stays pending until the actual state enables it") {
    AtomSet world{HERE};
    Plan p;
    p.steps.push_back({0, act("collect", {{HERE, true}, {READY, true}}, {}, {READY}, 5)});
    ExecutionState exec("g", p, true);
    MonitorConfig cfg;

    auto r = tick(exec, ExecContext{&world, 100, {}, {}}, cfg);
    REQUIRE(r.events.size() == 1);
    CHECK(r.events[0].kind == ExecEventKind::action_pending);
    CHECK(tick(exec, ExecContext{&world, 150, {}, {}}, cfg).events.empty());

    world.insert(READY);
    r = tick(exec, ExecContext{&world, 200, {}, {}}, cfg);
    REQUIRE(r.events.size() == 1);
    CHECK(r.events[0].kind == ExecEventKind::action_start);
    const auto fin = complete_action(exec, 205, cfg);
    CHECK(fin.status == ExecStatus::finished);
    CHECK(exec.done());
}

TEST_CASE("resources gate the start as well") {
    AtomSet world{HERE, READY};
    Plan p;
    p.steps.push_back({0, act("collect", {{HERE, true}}, {}, {}, 5)});
    ExecutionState exec("g", p, false);
    bool held = false;
    const auto ready = [&](const GroundAction&) { return held; };
    CHECK(tick(exec, ExecContext{&world, 0, ready, {}}, MonitorConfig{}).events[0].kind == ExecEventKind::action_pending);
    held = true;
    CHECK(tick(exec, ExecContext{&world, 1, ready, {}}, MonitorConfig{}).events[0].kind == ExecEventKind::action_start);
}

TEST_CASE("a pending action times out") {
    AtomSet world;
    Plan p;
    p.steps.push_back({0, act("start", {{FILLED, true}}, {READY}, {FILLED}, 5)});
    MonitorConfig cfg;
    cfg.pending_timeout = 30;

    ExecutionState plain_exec("g", p, false);
    tick(plain_exec, ExecContext{&world, 10, {}, {}}, cfg);
    CHECK(tick(plain_exec, ExecContext{&world, 39, {}, {}}, cfg).status == ExecStatus::active);
    const auto r = tick(plain_exec, ExecContext{&world, 40, {}, {}}, cfg);
    CHECK(r.status == ExecStatus::failed);
    CHECK(r.events.at(0).kind == ExecEventKind::action_timeout);

    ExecutionState dependent_exec("g", p, true);
    tick(dependent_exec, ExecContext{&world, 10, {}, {}}, cfg);
    CHECK(tick(dependent_exec, ExecContext{&world, 40, {}, {}}, cfg).status == ExecStatus::active);
    CHECK(tick(dependent_exec, ExecContext{&world, 70, {}, {}}, cfg).status == ExecStatus::failed);
}

TEST_CASE("failed actions are retried up to the limit") {
    AtomSet world;
    Plan p;
    p.steps.push_back({0, act("move", {}, {HERE}, {}, 4)});
    MonitorConfig cfg;
    cfg.max_retries = 1;
    ExecutionState exec("g", p, false);

    tick(exec, ExecContext{&world, 0, {}, {}}, cfg);
    auto r = complete_action(exec, 4, cfg, false);
    CHECK(r.status == ExecStatus::active);
    CHECK(r.events.back().kind == ExecEventKind::action_retry);
    CHECK_FALSE(r.update.has_value());

    tick(exec, ExecContext{&world, 4, {}, {}}, cfg);
    r = complete_action(exec, 8, cfg, false);
    CHECK(r.status == ExecStatus::failed);
    CHECK(r.events.back().kind == ExecEventKind::action_failed);
}

TEST_CASE("jittered durations never drop below one tick") {
    AtomSet world;
    ExecutionState exec("g", two_steps(), false);
    tick(exec, ExecContext{&world, 3, {}, [](const GroundAction&) { return Time{-4}; }}, MonitorConfig{});
    CHECK(exec.current->ends_at == 4);
}

TEST_CASE("an empty plan is finished on the first tick") {
    AtomSet world;
    ExecutionState exec("g", Plan{}, false);
    CHECK(tick(exec, ExecContext{&world, 0, {}, {}}, MonitorConfig{}).status == ExecStatus::finished);
}
