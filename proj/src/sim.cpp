#include "pledge/sim.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <random>
#include <set>

#include "pledge/error.hpp"
#include "pledge/executor.hpp"
#include "pledge/goal.hpp"
#include "pledge/lock.hpp"
#include "pledge/promise.hpp"

namespace pledge {

void apply_options(Scenario& scenario, const RunOptions& options) {
    if (options.seed) {
        scenario.seed = *options.seed;
    }
    if (options.promises) {
        scenario.promises = *options.promises;
    }
    if (options.lookahead) {
        scenario.lookahead = *options.lookahead;
    }
}

namespace {

/// A goal operator grounded for one agent, with everything the reasoning
/// cycle needs precomputed.
struct Candidate {
    const GoalOperator* op = nullptr;
    Binding binding;
    std::vector<Lit> pre;
    std::vector<Lit> objective;
    std::vector<std::string> resources;
    std::string label;
};

struct Agent {
    AgentSpec spec;
    WorldModel wm;
    PromiseStore store;
    std::vector<GroundAction> actions;
    std::vector<Candidate> candidates;
    std::optional<ExecutionState> exec;
    std::string failed_signature;
    std::uint64_t seq = 0;
};

struct Delivery {
    Time at = 0;
    std::size_t agent = 0;
    WorldUpdate update;
};

struct Formulable {
    const Candidate* candidate = nullptr;
    bool dependent = false;
    std::set<std::string> sources;
};

std::vector<std::string> atom_names(const Signature& sig, std::span<const AtomId> ids) {
    std::vector<std::string> out;
    out.reserve(ids.size());
    for (AtomId id : ids) {
        out.push_back(to_string(sig.atom(id)));
    }
    return out;
}

std::string plan_summary(const Plan& plan) {
    std::string out;
    for (const auto& step : plan.steps) {
        if (!out.empty()) {
            out += "; ";
        }
        out += std::to_string(step.start) + " " + step.action.label();
    }
    return out;
}

class Simulator {
public:
    explicit Simulator(const Scenario& sc) : sc_(sc), truth_(TimedState{sc.init, 0}), locks_(sc.locks), rng_(sc.seed) {
        promises_active_ = sc.promises_active();
        const auto all_actions = ground_actions(sc.domain, sc.sig, &sc.init);
        const auto statics = sc.domain.static_predicates();
        const auto& agent_type = sc.sig.type_of(sc.agents.front().id);
        for (const auto& spec : sc.agents) {
            Agent a;
            a.spec = spec;
            a.wm = WorldModel(TimedState{sc.init, 0});
            for (const auto& action : all_actions) {
                const bool own = std::all_of(action.args.begin(), action.args.end(), [&](const std::string& arg) {
                    return sc.sig.type_of(arg) != agent_type || arg == spec.id;
                });
                if (own) {
                    a.actions.push_back(action);
                }
            }
            for (const auto& op : sc.operators) {
                std::map<std::string, std::string> fixed;
                if (op.agent_param) {
                    fixed[*op.agent_param] = spec.id;
                }
                for (auto& gc : ground_operator(op, sc.sig, fixed)) {
                    Candidate c;
                    c.op = gc.op;
                    c.binding = std::move(gc.binding);
                    bool possible = true;
                    for (const auto& pattern : op.precondition) {
                        const Lit l = sc.sig.lit(ground_literal(pattern, op, c.binding));
                        if (statics.count(pattern.atom.predicate) && !satisfies(sc.init, l)) {
                            possible = false;
                            break;
                        }
                        c.pre.push_back(l);
                    }
                    if (!possible) {
                        continue;
                    }
                    for (const auto& pattern : op.objective) {
                        c.objective.push_back(sc.sig.lit(ground_literal(pattern, op, c.binding)));
                    }
                    for (const auto& r : op.resources) {
                        c.resources.push_back(ground_resource(r, op, c.binding));
                    }
                    c.label = op.class_name + "(";
                    for (std::size_t i = 0; i < c.binding.size(); ++i) {
                        c.label += (i ? "," : "") + c.binding[i];
                    }
                    c.label += ")";
                    a.candidates.push_back(std::move(c));
                }
            }
            agents_.push_back(std::move(a));
        }
    }

    RunResult run() {
        Event& header = emit(0, "run-start");
        header.scenario = sc_.name;
        header.seed = sc_.seed;
        header.promises = promises_active_;
        for (const auto& a : agents_) {
            header.agents.push_back(a.spec.id);
        }
        header.init = atom_names(sc_.sig, sc_.init.ids());
        for (Lit l : sc_.objective) {
            header.objective.push_back(to_string(sc_.sig.literal(l)));
        }

        for (Time t = 0; t <= sc_.tick_bound; ++t) {
            deliver_due(t);
            truth_.advance_to(t);
            for (auto& a : agents_) {
                a.wm.advance_to(t);
            }
            detect_stale(t);
            for (auto& a : agents_) {
                step_agent(a, t);
            }
            check_invariants(t);
            if (satisfies_all(truth_.atoms(), sc_.objective)) {
                emit(t, "objective-reached").detail = "makespan " + std::to_string(t);
                result_.objective_reached = true;
                result_.end_time = t;
                break;
            }
            if (t == sc_.tick_bound) {
                emit(t, "run-timeout").detail = "tick bound " + std::to_string(t);
                result_.end_time = t;
            }
        }
        result_.events = std::move(events_);
        return std::move(result_);
    }

private:
    Event& emit(Time t, std::string kind, std::string agent = {}) {
        Event& e = events_.emplace_back();
        e.seq = events_.size() - 1;
        e.t = t;
        e.kind = std::move(kind);
        e.agent = std::move(agent);
        return e;
    }

    Event& emit_goal(Time t, const std::string& kind, const Goal& g) {
        Event& e = emit(t, kind, g.agent);
        e.goal = g.id;
        e.label = g.label();
        return e;
    }

    void violation(Time t, const std::string& what) { emit(t, "invariant-violation").detail = what; }

    // -- world and promise distribution -------------------------------------

    void publish(Agent& a, Time t, std::vector<AtomId> adds, std::vector<AtomId> dels,
                 std::vector<std::string> records, const std::string& action) {
        std::sort(adds.begin(), adds.end());
        std::sort(dels.begin(), dels.end());
        WorldUpdate u{std::move(adds), std::move(dels), a.spec.id, ++a.seq, std::move(records)};
        if (!u.adds.empty() || !u.dels.empty()) {
            Event& e = emit(t, "world-update", a.spec.id);
            e.action = action;
            e.adds = atom_names(sc_.sig, u.adds);
            e.dels = atom_names(sc_.sig, u.dels);
        }
        absorb(truth_, truth_store_, u, t, "");
        for (std::size_t i = 0; i < agents_.size(); ++i) {
            if (sc_.latency == 0 || &agents_[i] == &a) {
                absorb(agents_[i].wm, agents_[i].store, u, t, agents_[i].spec.id);
            } else {
                queue_.push_back({t + sc_.latency, i, u});
            }
        }
    }

    void absorb(WorldModel& wm, PromiseStore& store, const WorldUpdate& u, Time t, const std::string& who) {
        const auto res = wm.apply(u);
        if (res.status == UpdateStatus::duplicate) {
            emit(t, "wm-duplicate", who).detail = u.origin + "#" + std::to_string(u.seq);
        }
        for (const auto& applied : res.applied) {
            for (const auto& record : applied.records) {
                const auto decoded = decode_record(record, sc_.sig);
                if (const auto* p = std::get_if<Promise>(&decoded)) {
                    store.add(*p);
                } else {
                    store.retract(std::get<Retraction>(decoded).goal_id);
                }
            }
        }
    }

    void deliver_due(Time t) {
        std::vector<Delivery> later;
        for (auto& d : queue_) {
            if (d.at <= t) {
                absorb(agents_[d.agent].wm, agents_[d.agent].store, d.update, t, agents_[d.agent].spec.id);
            } else {
                later.push_back(std::move(d));
            }
        }
        queue_ = std::move(later);
    }

    void detect_stale(Time t) {
        for (const auto& p : truth_store_.all()) {
            if (!is_stale(p, truth_.atoms(), t, sc_.stale_grace)) {
                continue;
            }
            const auto wire = encode_promise(p, sc_.sig);
            if (stale_reported_.insert(wire).second) {
                Event& e = emit(t, "promise-stale", p.agent);
                e.goal = p.goal_id;
                e.detail = wire;
            }
        }
    }

    // -- agents -------------------------------------------------------------

    void step_agent(Agent& a, Time t) {
        if (t < a.spec.start) {
            return;
        }
        if (a.exec && completion_due(*a.exec, t)) {
            bool ok = true;
            if (sc_.action_failure_probability > 0.0) {
                ok = static_cast<double>(rng_() % 1000000) >= sc_.action_failure_probability * 1e6;
            }
            auto r = complete_action(*a.exec, t, sc_.monitor, ok);
            log_exec(a, t, r);
            if (r.update) {
                const auto label = r.events.back().action->label();
                publish(a, t, std::move(r.update->adds), std::move(r.update->dels), {}, label);
            }
            if (r.status != ExecStatus::active) {
                end_goal(a, t, r.status == ExecStatus::finished);
            }
        }
        if (!a.exec) {
            reason(a, t);
        }
        if (a.exec) {
            const Goal& g = goals_.at(a.exec->goal_id);
            ExecContext ctx;
            ctx.atoms = &a.wm.atoms();
            ctx.now = t;
            ctx.resources_ready = [&](const GroundAction& action) {
                for (const auto& r : resources_of(g)) {
                    if (action.mentions(r) && !locks_.holds(g.id, r)) {
                        return false;
                    }
                }
                return true;
            };
            ctx.duration = [&](const GroundAction& action) { return draw_duration(action); };
            auto r = tick(*a.exec, ctx, sc_.monitor);
            log_exec(a, t, r);
            for (const auto& e : r.events) {
                if (e.kind == ExecEventKind::action_start && !satisfies_all(truth_.atoms(), e.action->pre)) {
                    violation(t, "action " + e.action->label() + " started with a false precondition");
                }
            }
            if (r.status != ExecStatus::active) {
                end_goal(a, t, r.status == ExecStatus::finished);
            }
        }
    }

    std::vector<std::string> resources_of(const Goal& g) const {
        std::vector<std::string> out;
        for (const auto& r : g.op->resources) {
            out.push_back(ground_resource(r, *g.op, g.binding));
        }
        return out;
    }

    Time draw_duration(const GroundAction& action) {
        Time d = action.duration;
        if (sc_.duration_jitter > 0) {
            const auto span = static_cast<std::uint64_t>(2 * sc_.duration_jitter + 1);
            d += static_cast<Time>(rng_() % span) - sc_.duration_jitter;
        }
        return std::max<Time>(d, 1);
    }

    void log_exec(const Agent& a, Time t, const ExecResult& r) {
        for (const auto& e : r.events) {
            Event& ev = emit(t, to_string(e.kind), a.spec.id);
            ev.goal = a.exec ? a.exec->goal_id : std::string{};
            ev.action = e.action->label();
            ev.detail = e.detail;
        }
    }

    void end_goal(Agent& a, Time t, bool finished) {
        Goal& g = goals_.at(a.exec->goal_id);
        transition(g, finished ? GoalEvent::finish : GoalEvent::fail, t);
        emit_goal(t, finished ? "goal-finished" : "goal-failed", g);
        if (truth_store_.has_goal(g.id)) {
            const Retraction retraction{a.spec.id, g.id};
            const auto wire = encode_retraction(retraction);
            Event& e = emit(t, "promise-retracted", a.spec.id);
            e.goal = g.id;
            e.detail = wire;
            publish(a, t, {}, {}, {wire}, "");
        }
        const bool suppressed = std::any_of(sc_.faults.begin(), sc_.faults.end(), [&](const Fault& f) {
            return f.kind == "suppress-release" && f.agent == a.spec.id && f.goal_class == g.op->class_name;
        });
        if (suppressed) {
            Event& e = emit_goal(t, "fault-injected", g);
            e.detail = "resource release suppressed";
            suppressed_.insert(g.id);
        } else {
            log_locks(t, locks_.release(g.id));
        }
        ended_.push_back(g.id);
        a.exec.reset();
        a.failed_signature.clear();
    }

    void log_locks(Time t, const std::vector<LockEvent>& events) {
        for (const auto& le : events) {
            Event& e = emit(t, to_string(le.kind), le.agent);
            e.goal = le.goal_id;
            e.resource = le.resource;
            if (le.other) {
                e.detail = (le.kind == LockEventKind::handover ? "from " : "held by ") + le.other->agent + "/" +
                           le.other->goal_id;
            }
        }
    }

    std::vector<Formulable> formulable(const Agent& a, Time t, const PromiseStore& usable) const {
        std::vector<Formulable> out;
        const auto& atoms = a.wm.atoms();
        for (const auto& c : a.candidates) {
            if (satisfies_all(atoms, c.objective)) {
                continue;
            }
            if (satisfies_all(atoms, c.pre)) {
                out.push_back({&c, false, {}});
                continue;
            }
            const Time lookahead = sc_.lookahead_of(*c.op);
            if (!promises_active_ || lookahead <= 0 ||
                !check_formulation(c.pre, atoms, t, usable, lookahead, sc_.formulation)) {
                continue;
            }
            Formulable f{&c, true, {}};
            for (Lit l : c.pre) {
                if (!satisfies(atoms, l)) {
                    for (auto& s : usable.earliest_sources(l)) {
                        f.sources.insert(std::move(s));
                    }
                }
            }
            out.push_back(std::move(f));
        }
        return out;
    }

    void reason(Agent& a, Time t) {
        const PromiseStore usable = promises_active_
                                        ? usable_promises(a.store, a.wm.atoms(), t, a.spec.id, sc_.stale_grace)
                                        : PromiseStore{};
        const auto options = formulable(a, t, usable);
        if (options.empty()) {
            return;
        }
        std::string signature;
        for (const auto& f : options) {
            signature += f.candidate->label + (f.dependent ? "*;" : ";");
        }
        signature += "|" + std::to_string(locks_.version()) + "|" + std::to_string(a.wm.version()) + "|" +
                     std::to_string(a.store.version());
        if (signature == a.failed_signature) {
            return;
        }

        std::vector<std::string> open;
        for (const auto& f : options) {
            for (const auto& source : f.sources) {
                // Sources are already dispatched, so promise dependencies cannot form a cycle.
                const auto it = goals_.find(source);
                if (it == goals_.end() || it->second.mode != GoalMode::dispatched) {
                    violation(t, "promise source " + source + " is not a dispatched goal");
                }
            }
            Goal g = make_goal(GoalCandidate{f.candidate->op, f.candidate->binding}, a.spec.id, t, ++goal_counter_);
            g.promise_dependent = f.dependent;
            g.promise_sources = f.sources;
            Event& e = emit_goal(t, "goal-formulated", g);
            e.promise_dependent = g.promise_dependent;
            e.sources.assign(g.promise_sources.begin(), g.promise_sources.end());
            open.push_back(g.id);
            candidate_of_[g.id] = f.candidate;
            goals_.emplace(g.id, std::move(g));
        }

        bool dispatched = false;
        while (!open.empty() && !dispatched) {
            std::vector<const Goal*> pool;
            for (const auto& id : open) {
                pool.push_back(&goals_.at(id));
            }
            const auto chosen = select_goal(std::span<const Goal* const>(pool), sc_.selection);
            std::erase(open, *chosen);
            Goal& g = goals_.at(*chosen);
            transition(g, GoalEvent::select, t);
            emit_goal(t, "goal-selected", g);
            dispatched = try_dispatch(a, g, t, usable);
        }
        for (const auto& id : open) {
            Goal& g = goals_.at(id);
            transition(g, GoalEvent::retract, t);
            emit_goal(t, "goal-retracted", g);
        }
        if (!dispatched) {
            a.failed_signature = signature;
        }
    }

    bool try_dispatch(Agent& a, Goal& g, Time t, const PromiseStore& usable) {
        const Candidate& c = *candidate_of_.at(g.id);
        PlanningTask task;
        task.actions = a.actions;
        task.init = a.wm.atoms();
        task.objective = c.objective;
        if (g.promise_dependent) {
            task.tils = to_tils(usable, a.wm.atoms(), t, a.spec.id, sc_.stale_grace);
        }
        const auto started = std::chrono::steady_clock::now();
        auto planned = plan(task, sc_.planner);
        result_.planner_seconds.push_back(
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count());
        if (planned.status != PlanStatus::solved) {
            emit_goal(t, "plan-failed", g).detail = to_string(planned.status);
            transition(g, GoalEvent::reject, t);
            emit_goal(t, "goal-rejected", g).detail = "no plan";
            return false;
        }
        g.plan = std::move(planned.plan);
        transition(g, GoalEvent::expand, t);
        emit_goal(t, "goal-expanded", g).detail = plan_summary(*g.plan);

        transition(g, GoalEvent::commit, t);
        emit_goal(t, "goal-committed", g);
        const auto verdict =
            locks_.request(LockRequest{a.spec.id, g.id, c.resources, g.promise_dependent, g.promise_sources});
        log_locks(t, verdict.events);
        if (verdict.overall == Acquisition::denied) {
            transition(g, GoalEvent::reject, t);
            emit_goal(t, "goal-rejected", g).detail = "lock denied";
            return false;
        }
        const auto held = locks_.held_by(g.id);
        g.acquired_resources.insert(held.begin(), held.end());

        transition(g, GoalEvent::dispatch, t);
        emit_goal(t, "goal-dispatched", g).promise_dependent = g.promise_dependent;
        if (promises_active_) {
            std::vector<std::string> records;
            for (const auto& p : issue_promises(g, sc_.sig, t)) {
                records.push_back(encode_promise(p, sc_.sig));
                Event& e = emit(t, "promise-issued", a.spec.id);
                e.goal = g.id;
                e.detail = records.back();
            }
            if (!records.empty()) {
                publish(a, t, {}, {}, std::move(records), "");
            }
        }
        a.exec.emplace(g.id, *g.plan, g.promise_dependent);
        return true;
    }

    // -- runtime invariants -------------------------------------------------

    void check_invariants(Time t) {
        for (const auto& [r, h] : locks_.holders()) {
            if (!is_promised_resource(r) && locks_.holds(h.goal_id, promised_resource(r))) {
                violation(t, "goal " + h.goal_id + " holds both " + r + " and its promised resource");
            }
        }
        for (const auto& p : truth_store_.all()) {
            const auto it = goals_.find(p.goal_id);
            if (it == goals_.end() || it->second.mode != GoalMode::dispatched) {
                violation(t, "promise of goal " + p.goal_id + " outlives its dispatch");
            }
        }
        for (const auto& id : ended_) {
            if (!suppressed_.count(id) && !locks_.held_by(id).empty()) {
                violation(t, "ended goal " + id + " still holds resources");
            }
        }
        ended_.clear();

        std::size_t active = 0;
        std::size_t pending = 0;
        for (const auto& a : agents_) {
            if (t < a.spec.start) {
                continue;
            }
            ++active;
            if (a.exec && a.exec->current && a.exec->current->phase == Phase::pending) {
                ++pending;
            }
        }
        const bool stuck = active > 0 && pending == active;
        if (stuck && !deadlock_reported_) {
            violation(t, "every agent is waiting on a pending action");
        }
        deadlock_reported_ = stuck;
    }

    const Scenario& sc_;
    bool promises_active_ = false;
    WorldModel truth_;
    PromiseStore truth_store_;
    LockTable locks_;
    std::mt19937_64 rng_;
    std::vector<Agent> agents_;
    std::vector<Delivery> queue_;
    std::map<std::string, Goal> goals_;
    std::map<std::string, const Candidate*> candidate_of_;
    std::set<std::string> stale_reported_;
    std::set<std::string> suppressed_;
    std::vector<std::string> ended_;
    bool deadlock_reported_ = false;
    std::uint64_t goal_counter_ = 0;
    std::vector<Event> events_;
    RunResult result_;
};

} // namespace

RunResult run(const Scenario& scenario) {
    Simulator sim(scenario);
    return sim.run();
}

} // namespace pledge
