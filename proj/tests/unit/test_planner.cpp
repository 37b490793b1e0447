#include "doctest.h"

#include <fstream>
#include <random>
#include <sstream>

#include "instances.hpp"
#include "oracles.hpp"
#include "pledge/error.hpp"
#include "pledge/planner.hpp"

using namespace pledge;

namespace {

GroundAction action(std::string name, std::vector<Lit> pre, std::vector<AtomId> adds, std::vector<AtomId> dels,
                    Time duration) {
    GroundAction g;
    g.name = std::move(name);
    g.pre = std::move(pre);
    g.adds = std::move(adds);
    g.dels = std::move(dels);
    g.duration = duration;
    return g;
}

std::string slurp(const std::string& relative) {
    std::ifstream in(std::string(PLEDGE_SOURCE_DIR) + "/" + relative);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

constexpr AtomId P = 0;
constexpr AtomId Q = 1;

} // namespace

TEST_CASE("makespan") {
    CHECK(makespan(Plan{}) == 0);
    Plan p;
    p.steps.push_back({2, action("a", {}, {P}, {}, 7)});
    CHECK(makespan(p) == 9);
}

TEST_CASE("an objective that already holds needs no actions") {
    const std::vector<GroundAction> actions{action("a", {}, {Q}, {}, 3)};
    const auto r = plan(PlanningTask{actions, AtomSet{P}, {Lit{P, true}}, {}, 100});
    REQUIRE(r.status == PlanStatus::solved);
    CHECK(r.plan.steps.empty());
}

TEST_CASE("an action waits for the TIL that enables it") {
    const std::vector<GroundAction> actions{action("a", {{P, true}}, {Q}, {}, 3)};
    const std::vector<TimedLit> tils{{5, {P, true}}};
    for (auto mode : {SearchMode::uniform_cost, SearchMode::greedy}) {
        const auto r = plan(PlanningTask{actions, AtomSet{}, {Lit{Q, true}}, tils, 100}, PlannerConfig{mode});
        REQUIRE(r.status == PlanStatus::solved);
        REQUIRE(r.plan.steps.size() == 1);
        CHECK(r.plan.steps[0].start == 5);
        CHECK(makespan(r.plan) == 8);
        CHECK(oracle::brute_force_makespan(actions, AtomSet{}, tils, std::vector<Lit>{{Q, true}}, 1) == 8);
    }
}

TEST_CASE("unsolvable and budget results are distinct") {
    const std::vector<GroundAction> actions{action("a", {{P, true}}, {Q}, {}, 3)};
    CHECK(plan(PlanningTask{actions, AtomSet{}, {Lit{Q, true}}, {}, 100}).status == PlanStatus::unsolvable);
    CHECK(plan(PlanningTask{actions, AtomSet{P}, {Lit{Q, true}}, {}, 2}).status == PlanStatus::unsolvable);

    std::vector<GroundAction> many;
    for (AtomId i = 0; i < 12; ++i) {
        many.push_back(action("t" + std::to_string(i), {}, {i}, {}, 1));
    }
    const auto r = plan(PlanningTask{many, AtomSet{}, {Lit{40, true}}, {}, 1000}, PlannerConfig{SearchMode::uniform_cost, 50});
    CHECK(r.status == PlanStatus::budget_exceeded);
    CHECK_THROWS_AS(plan(PlanningTask{many, AtomSet{}, {}, {{0, {P, true}}}, 10}), ContractViolation);
}

TEST_CASE("arriving later can be optimal while TILs are pending") {
    // X is deleted at 100 and Y appears then; the objective needs both.
    constexpr AtomId X = 0;
    constexpr AtomId Y = 1;
    const std::vector<GroundAction> actions{action("add-x", {}, {X}, {}, 60), action("idle", {}, {}, {}, 50)};
    const std::vector<TimedLit> tils{{100, {Y, true}}, {100, {X, false}}};
    const std::vector<Lit> goal{{X, true}, {Y, true}};
    const auto r = plan(PlanningTask{actions, AtomSet{}, goal, tils, 1000});
    REQUIRE(r.status == PlanStatus::solved);
    CHECK(makespan(r.plan) == 110);
    CHECK(oracle::brute_force_makespan(actions, AtomSet{}, tils, goal, 4) == 110);
}

TEST_CASE("among equally short plans the planner prefers fewer actions") {
    const std::vector<GroundAction> actions{action("hop1", {}, {P}, {}, 5), action("hop2", {{P, true}}, {Q}, {}, 5),
                                            action("jump", {}, {Q}, {}, 10)};
    const auto r = plan(PlanningTask{actions, AtomSet{}, {Lit{Q, true}}, {}, 100});
    REQUIRE(r.status == PlanStatus::solved);
    CHECK(makespan(r.plan) == 10);
    CHECK(r.plan.steps.size() == 1);
}

TEST_CASE("the validator rejects an action one tick before its enabling TIL") {
    const GroundAction a = action("a", {{P, true}}, {Q}, {}, 3);
    const std::vector<TimedLit> tils{{5, {P, true}}};
    Plan early;
    early.steps.push_back({4, a});
    const auto v = validate_plan(early, AtomSet{}, tils, std::vector<Lit>{{Q, true}});
    CHECK_FALSE(v.valid);
    REQUIRE(v.failed_step.has_value());
    CHECK(*v.failed_step == 0);

    Plan on_time;
    on_time.steps.push_back({5, a});
    CHECK(validate_plan(on_time, AtomSet{}, tils, std::vector<Lit>{{Q, true}}).valid);
    CHECK(validate_plan(Plan{}, AtomSet{Q}, {}, std::vector<Lit>{{Q, true}}).valid);
}

TEST_CASE("returned plans validate and uniform-cost makespans match enumeration") {
    std::mt19937_64 rng(2024);
    int solved = 0;
    for (int i = 0; i < 100; ++i) {
        const auto inst = oracle::random_instance(rng);
        const auto ucs = plan(PlanningTask{inst.actions, inst.init, inst.objective, inst.tils, 200});
        const auto greedy =
            plan(PlanningTask{inst.actions, inst.init, inst.objective, inst.tils, 200}, PlannerConfig{SearchMode::greedy});
        const auto brute = oracle::brute_force_makespan(inst.actions, inst.init, inst.tils, inst.objective, 4);
        CHECK((ucs.status == PlanStatus::solved) == (greedy.status == PlanStatus::solved));
        if (ucs.status != PlanStatus::solved) {
            CHECK_FALSE(brute.has_value());
            continue;
        }
        ++solved;
        CHECK(validate_plan(ucs.plan, inst.init, inst.tils, inst.objective).valid);
        CHECK(validate_plan(greedy.plan, inst.init, inst.tils, inst.objective).valid);
        CHECK(makespan(greedy.plan) >= makespan(ucs.plan));
        if (brute) {
            CHECK(makespan(ucs.plan) <= *brute);
        }
        if (ucs.plan.steps.size() <= 4) {
            CHECK(brute == makespan(ucs.plan));
        }
    }
    CHECK(solved > 30);
}

TEST_CASE("the shipped problem schedules start-machine after the announced idle time") {
    const Domain d = parse_domain(slurp("data/xenonite/domain.pddl"));
    const Problem p = parse_problem(slurp("data/xenonite/problem.pddl"), d);
    const Signature sig = make_signature(d, p.objects);
    const AtomSet init = sig.to_set(p.init);
    const auto actions = ground_actions(d, sig, &init);
    std::vector<TimedLit> tils;
    for (const auto& t : p.tils) {
        tils.push_back({t.at, sig.lit(t.literal)});
    }
    std::vector<Lit> objective;
    for (const auto& l : p.objective) {
        objective.push_back(sig.lit(l));
    }
    const auto r = plan(PlanningTask{actions, init, objective, tils, 10000});
    REQUIRE(r.status == PlanStatus::solved);
    CHECK(r.plan.steps.front().action.name == "move");
    CHECK(r.plan.steps.back().action.name == "start-machine");
    for (const auto& s : r.plan.steps) {
        if (s.action.name == "deliver-container") {
            CHECK(s.start >= 400);
        }
    }
    CHECK(makespan(r.plan) == 650);
    CHECK(validate_plan(r.plan, init, tils, objective).valid);
}
