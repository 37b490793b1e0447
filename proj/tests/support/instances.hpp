#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "pledge/pddl.hpp"
#include "pledge/world.hpp"

namespace pledge::oracle {

/// Small random planning instance over atoms 0..atoms-1.
struct Instance {
    std::vector<GroundAction> actions;
    AtomSet init;
    std::vector<TimedLit> tils;
    std::vector<Lit> objective;
};

inline Instance random_instance(std::mt19937_64& rng) {
    Instance inst;
    const AtomId atoms = 4 + static_cast<AtomId>(rng() % 3);
    const std::size_t n_actions = 3 + rng() % 4;
    for (AtomId a = 0; a < atoms; ++a) {
        if (rng() % 3 == 0) {
            inst.init.insert(a);
        }
    }
    for (std::size_t i = 0; i < n_actions; ++i) {
        GroundAction g;
        g.name = "a" + std::to_string(i);
        g.duration = 1 + static_cast<Time>(rng() % 5);
        for (AtomId a = 0; a < atoms; ++a) {
            switch (rng() % 7) {
            case 0: g.pre.push_back({a, true}); break;
            case 1: g.pre.push_back({a, false}); break;
            case 2:
            case 3: g.adds.push_back(a); break;
            case 4: g.dels.push_back(a); break;
            default: break;
            }
        }
        inst.actions.push_back(std::move(g));
    }
    const std::size_t n_tils = rng() % 3;
    for (std::size_t i = 0; i < n_tils; ++i) {
        inst.tils.push_back({1 + static_cast<Time>(rng() % 8), Lit{static_cast<AtomId>(rng() % atoms), rng() % 3 != 0}});
    }
    const std::size_t n_goals = 1 + rng() % 2;
    for (std::size_t i = 0; i < n_goals; ++i) {
        const Lit l{static_cast<AtomId>(rng() % atoms), rng() % 4 != 0};
        bool clash = false;
        for (Lit o : inst.objective) {
            clash |= o.atom == l.atom;
        }
        if (!clash) {
            inst.objective.push_back(l);
        }
    }
    return inst;
}

} // namespace pledge::oracle
