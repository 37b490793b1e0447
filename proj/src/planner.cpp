#include "pledge/planner.hpp"

#include <algorithm>
#include <queue>
#include <tuple>
#include <unordered_map>

#include "pledge/error.hpp"

namespace pledge {

Time makespan(const Plan& plan) {
    if (plan.steps.empty()) {
        return 0;
    }
    const auto& last = plan.steps.back();
    return last.start + last.action.duration;
}

std::string to_string(PlanStatus status) {
    switch (status) {
    case PlanStatus::solved:
        return "solved";
    case PlanStatus::unsolvable:
        return "unsolvable";
    case PlanStatus::budget_exceeded:
        return "budget-exceeded";
    }
    return "unknown";
}

namespace {

constexpr int kRoot = -1;
constexpr int kWait = -2;

struct SearchNode {
    AtomSet atoms;
    Time time = 0;
    std::size_t til_index = 0;
    int parent = -1;
    int via = kRoot;
    /// Actions on the path from the root.
    int steps = 0;
};

// While TILs are pending, arriving later can pay off (an action may then end
// after a TIL instead of before it), so the time is part of the key.
struct NodeKey {
    AtomSet atoms;
    std::size_t til_index;
    bool waited;
    Time time;

    friend bool operator==(const NodeKey&, const NodeKey&) = default;
};

struct NodeKeyHash {
    std::size_t operator()(const NodeKey& k) const noexcept {
        return k.atoms.hash() ^ (k.til_index * 0x9e3779b97f4a7c15ULL) ^ (k.waited ? 0x51ed27 : 0) ^
               (static_cast<std::size_t>(k.time) * 0xc2b2ae3d27d4eb4fULL);
    }
};

void apply_til(AtomSet& atoms, const TimedLit& til) {
    if (til.literal.positive) {
        atoms.insert(til.literal.atom);
    } else {
        atoms.erase(til.literal.atom);
    }
}

int unsatisfied(const AtomSet& atoms, std::span<const Lit> objective) {
    int n = 0;
    for (Lit l : objective) {
        n += satisfies(atoms, l) ? 0 : 1;
    }
    return n;
}

} // namespace

PlanResult plan(const PlanningTask& task, const PlannerConfig& config) {
    if (task.bound <= 0) {
        throw ContractViolation("planning bound must be positive");
    }
    std::vector<TimedLit> tils = task.tils;
    std::stable_sort(tils.begin(), tils.end(), [](const TimedLit& a, const TimedLit& b) { return a.at < b.at; });
    for (const auto& t : tils) {
        if (t.at <= 0) {
            throw ContractViolation("timed initial literal times must be positive");
        }
    }

    PlanResult result;
    std::vector<SearchNode> nodes;
    // Earliest (time, steps) per key; fewer actions break makespan ties.
    std::unordered_map<NodeKey, std::pair<Time, int>, NodeKeyHash> best;
    // (primary, time, steps, insertion order, node)
    using Entry = std::tuple<Time, Time, int, std::size_t, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
    std::size_t counter = 0;

    auto key_of = [&](const SearchNode& n) {
        return NodeKey{n.atoms, n.til_index, n.via == kWait, n.til_index < tils.size() ? n.time : -1};
    };

    auto push = [&](SearchNode node) {
        NodeKey key = key_of(node);
        const std::pair<Time, int> cost{node.time, node.steps};
        auto it = best.find(key);
        if (it != best.end() && it->second <= cost) {
            return;
        }
        best[key] = cost;
        const Time primary =
            config.mode == SearchMode::greedy ? static_cast<Time>(unsatisfied(node.atoms, task.objective)) : node.time;
        const Time time = node.time;
        const int steps = node.steps;
        nodes.push_back(std::move(node));
        ++result.generated;
        open.emplace(primary, time, steps, counter++, static_cast<int>(nodes.size() - 1));
    };

    push(SearchNode{task.init, 0, 0, -1, kRoot, 0});

    while (!open.empty()) {
        const auto [primary, time, steps, order, index] = open.top();
        open.pop();
        {
            const SearchNode& n = nodes[static_cast<std::size_t>(index)];
            if (best[key_of(n)] < std::pair<Time, int>{n.time, n.steps}) {
                continue;
            }
        }
        if (result.expanded >= config.node_budget) {
            result.status = PlanStatus::budget_exceeded;
            return result;
        }
        ++result.expanded;

        const SearchNode current = nodes[static_cast<std::size_t>(index)];
        if (current.via != kWait && satisfies_all(current.atoms, task.objective)) {
            std::vector<int> chain;
            for (int at = index; at >= 0; at = nodes[static_cast<std::size_t>(at)].parent) {
                chain.push_back(at);
            }
            std::reverse(chain.begin(), chain.end());
            for (int at : chain) {
                const SearchNode& n = nodes[static_cast<std::size_t>(at)];
                if (n.via >= 0) {
                    const auto& action = task.actions[static_cast<std::size_t>(n.via)];
                    result.plan.steps.push_back({n.time - action.duration, action});
                }
            }
            result.status = PlanStatus::solved;
            return result;
        }

        for (std::size_t a = 0; a < task.actions.size(); ++a) {
            const GroundAction& action = task.actions[a];
            if (!satisfies_all(current.atoms, action.pre)) {
                continue;
            }
            const Time end = current.time + action.duration;
            if (end > task.bound) {
                continue;
            }
            SearchNode next{current.atoms, end, current.til_index, index, static_cast<int>(a), current.steps + 1};
            while (next.til_index < tils.size() && tils[next.til_index].at < end) {
                apply_til(next.atoms, tils[next.til_index++]);
            }
            for (AtomId d : action.dels) {
                next.atoms.erase(d);
            }
            for (AtomId ad : action.adds) {
                next.atoms.insert(ad);
            }
            while (next.til_index < tils.size() && tils[next.til_index].at == end) {
                apply_til(next.atoms, tils[next.til_index++]);
            }
            push(std::move(next));
        }
        if (current.til_index < tils.size()) {
            const Time at = tils[current.til_index].at;
            if (at <= task.bound) {
                SearchNode next{current.atoms, at, current.til_index, index, kWait, current.steps};
                while (next.til_index < tils.size() && tils[next.til_index].at == at) {
                    apply_til(next.atoms, tils[next.til_index++]);
                }
                push(std::move(next));
            }
        }
    }
    result.status = PlanStatus::unsolvable;
    return result;
}

Validation validate_plan(const Plan& plan,
                         const AtomSet& init,
                         std::span<const TimedLit> tils,
                         std::span<const Lit> objective) {
    Validation v;
    for (std::size_t i = 0; i < plan.steps.size(); ++i) {
        const auto& step = plan.steps[i];
        if (step.start < 0) {
            v.failed_step = i;
            v.message = "step " + std::to_string(i) + " starts before time 0";
            return v;
        }
        if (i > 0) {
            const auto& prev = plan.steps[i - 1];
            if (step.start < prev.start + prev.action.duration) {
                v.failed_step = i;
                v.message = "step " + std::to_string(i) + " " + step.action.label() +
                            " overlaps the previous action";
                return v;
            }
        }
    }

    enum Kind { action_end = 0, til = 1, action_start = 2 };
    struct Event {
        Time time;
        int kind;
        std::size_t ref;
    };
    std::vector<Event> events;
    for (std::size_t i = 0; i < tils.size(); ++i) {
        events.push_back({tils[i].at, til, i});
    }
    for (std::size_t i = 0; i < plan.steps.size(); ++i) {
        events.push_back({plan.steps[i].start, action_start, i});
        events.push_back({plan.steps[i].start + plan.steps[i].action.duration, action_end, i});
    }
    std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
        return std::tie(a.time, a.kind, a.ref) < std::tie(b.time, b.kind, b.ref);
    });

    const Time end = makespan(plan);
    AtomSet state = init;
    for (const Event& e : events) {
        if (e.time > end) {
            break;
        }
        switch (e.kind) {
        case action_end: {
            const auto& action = plan.steps[e.ref].action;
            for (AtomId d : action.dels) {
                state.erase(d);
            }
            for (AtomId a : action.adds) {
                state.insert(a);
            }
            break;
        }
        case til:
            if (tils[e.ref].literal.positive) {
                state.insert(tils[e.ref].literal.atom);
            } else {
                state.erase(tils[e.ref].literal.atom);
            }
            break;
        case action_start: {
            const auto& action = plan.steps[e.ref].action;
            for (Lit l : action.pre) {
                if (state.contains(l.atom) != l.positive) {
                    v.failed_step = e.ref;
                    v.message = "precondition of step " + std::to_string(e.ref) + " " + action.label() +
                                " is false at time " + std::to_string(e.time);
                    return v;
                }
            }
            break;
        }
        default:
            break;
        }
    }
    for (Lit l : objective) {
        if (state.contains(l.atom) != l.positive) {
            v.message = "objective does not hold at makespan " + std::to_string(end);
            return v;
        }
    }
    v.valid = true;
    return v;
}

} // namespace pledge
