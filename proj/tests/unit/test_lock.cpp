#include "doctest.h"

#include <random>

#include "oracles.hpp"
#include "pledge/lock.hpp"

using namespace pledge;

namespace {

LockRequest plain(std::string agent, std::string goal, std::vector<std::string> resources) {
    return LockRequest{std::move(agent), std::move(goal), std::move(resources), false, {}};
}

LockRequest dependent(std::string agent, std::string goal, std::vector<std::string> resources,
                      std::set<std::string> sources) {
    return LockRequest{std::move(agent), std::move(goal), std::move(resources), true, std::move(sources)};
}

} // namespace

TEST_CASE("free resources are granted") {
    LockTable table;
    const auto v = table.request(plain("WALL-E", "start", {"M1"}));
    CHECK(v.overall == Acquisition::granted);
    CHECK(table.holder("M1") == LockHolder{"WALL-E", "start"});
    CHECK(table.request(plain("WALL-E", "start", {"M1"})).overall == Acquisition::granted);
    CHECK(table.holders().size() == 1);
}

TEST_CASE("a plain goal is denied a held resource") {
    LockTable table;
    table.request(plain("WALL-E", "start", {"M1"}));
    const auto version = table.version();
    const auto v = table.request(plain("R2D2", "start2", {"M2", "M1"}));
    CHECK(v.overall == Acquisition::denied);
    // All or nothing: M2 stays free.
    CHECK_FALSE(table.holder("M2").has_value());
    CHECK(table.version() == version);
    REQUIRE(v.events.size() == 1);
    CHECK(v.events[0].kind == LockEventKind::denied);
}

TEST_CASE("a promise-dependent goal defers on the promising holder") {
    LockTable table;
    table.request(plain("WALL-E", "start", {"M1"}));
    const auto v = table.request(dependent("R2D2", "clean", {"M1"}, {"start"}));
    CHECK(v.overall == Acquisition::deferred);
    CHECK(table.holds("clean", "promised-M1"));
    CHECK(table.holds("start", "M1"));

    SUBCASE("release hands the resource over and frees the shadow") {
        const auto events = table.release("start");
        REQUIRE(events.size() == 3);
        CHECK(events[0].kind == LockEventKind::released);
        CHECK(events[1].kind == LockEventKind::handover);
        CHECK(events[1].goal_id == "clean");
        CHECK(events[2].kind == LockEventKind::released);
        CHECK(events[2].resource == "promised-M1");
        CHECK(table.holder("M1") == LockHolder{"R2D2", "clean"});
        CHECK_FALSE(table.holder("promised-M1").has_value());
    }

    SUBCASE("a second waiter is denied") {
        CHECK(table.request(dependent("EVE", "clean2", {"M1"}, {"start"})).overall == Acquisition::denied);
    }

    SUBCASE("a dependent goal does not defer on an unrelated holder") {
        CHECK(table.request(dependent("EVE", "other", {"M1"}, {"someone-else"})).overall == Acquisition::denied);
    }
}

TEST_CASE("deferring on any holder is configurable") {
    LockTable table(LockConfig{true});
    table.request(plain("WALL-E", "start", {"M1"}));
    CHECK(table.request(dependent("R2D2", "clean", {"M1"}, {})).overall == Acquisition::deferred);
}

TEST_CASE("releasing without waiters frees the resource") {
    LockTable table;
    table.request(plain("WALL-E", "start", {"M1", "C1"}));
    CHECK(table.release("start").size() == 2);
    CHECK(table.holders().empty());
    CHECK(table.release("unknown").empty());
}

TEST_CASE("random request and release sequences never produce two holders") {
    std::mt19937_64 rng(21);
    const std::vector<std::string> resources{"M1", "M2", "C1"};
    for (int round = 0; round < 200; ++round) {
        LockTable table;
        std::vector<Event> trace;
        std::uint64_t seq = 0;
        auto log = [&](Time t, const std::vector<LockEvent>& events) {
            for (const auto& e : events) {
                Event rec;
                rec.seq = ++seq;
                rec.t = t;
                rec.kind = to_string(e.kind);
                rec.agent = e.agent;
                rec.goal = e.goal_id;
                rec.resource = e.resource;
                trace.push_back(rec);
            }
        };
        for (Time t = 0; t < 40; ++t) {
            const std::string goal = "g" + std::to_string(rng() % 6);
            if (rng() % 3 == 0) {
                log(t, table.release(goal));
                continue;
            }
            std::vector<std::string> want;
            for (const auto& r : resources) {
                if (rng() % 2 == 0) {
                    want.push_back(r);
                }
            }
            std::set<std::string> sources;
            for (const auto& [r, h] : table.holders()) {
                if (rng() % 2 == 0) {
                    sources.insert(h.goal_id);
                }
            }
            log(t, table.request(LockRequest{"A" + goal, goal, want, rng() % 2 == 0, sources}).events);
        }
        const auto problems = oracle::check_locks(trace);
        CHECK_MESSAGE(problems.empty(), (problems.empty() ? "" : problems.front()));
    }
}
