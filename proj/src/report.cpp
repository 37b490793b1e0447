#include "pledge/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "pledge/error.hpp"

namespace pledge {

namespace {

std::string fixed(double value, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, value);
    return buf;
}

} // namespace

RunReport build_report(std::span<const Event> events) {
    RunReport report;
    report.events = events.size();
    std::map<std::string, std::size_t> span_index;
    std::map<std::string, std::size_t> agent_index;
    std::map<std::string, Time> formulated_at;
    std::map<std::string, Time> running_since;

    auto usage = [&](const std::string& agent) -> AgentUsage& {
        const auto it = agent_index.find(agent);
        if (it != agent_index.end()) {
            return report.agents[it->second];
        }
        agent_index[agent] = report.agents.size();
        report.agents.push_back({agent, 0, 0});
        return report.agents.back();
    };

    for (const auto& e : events) {
        report.end_time = std::max(report.end_time, e.t);
        if (e.kind == "run-start") {
            report.scenario = e.scenario;
            report.seed = e.seed.value_or(0);
            report.promises = e.promises.value_or(false);
            for (const auto& a : e.agents) {
                usage(a);
            }
        } else if (e.kind == "goal-formulated") {
            formulated_at[e.goal] = e.t;
            const auto [it, fresh] = report.first_formulated.emplace(e.label, e.t);
            if (!fresh) {
                it->second = std::min(it->second, e.t);
            }
            if (e.promise_dependent.value_or(false)) {
                ++report.promise_stats.used_in_formulation;
            }
        } else if (e.kind == "goal-dispatched") {
            GoalSpan span;
            span.goal = e.goal;
            span.label = e.label;
            span.agent = e.agent;
            span.formulated = formulated_at.count(e.goal) ? formulated_at[e.goal] : e.t;
            span.dispatched = e.t;
            span.promise_dependent = e.promise_dependent.value_or(false);
            span_index[e.goal] = report.goals.size();
            report.goals.push_back(span);
            ++usage(e.agent).goals;
        } else if (e.kind == "goal-finished" || e.kind == "goal-failed") {
            const auto it = span_index.find(e.goal);
            if (it != span_index.end()) {
                report.goals[it->second].ended = e.t;
                report.goals[it->second].outcome = e.kind == "goal-finished" ? "finished" : "failed";
            }
        } else if (e.kind == "action-start") {
            running_since[e.agent] = e.t;
        } else if (e.kind == "action-done" || e.kind == "action-failed") {
            const auto it = running_since.find(e.agent);
            if (it != running_since.end()) {
                usage(e.agent).busy += e.t - it->second;
                running_since.erase(it);
            }
        } else if (e.kind == "promise-issued") {
            ++report.promise_stats.issued;
        } else if (e.kind == "promise-retracted") {
            ++report.promise_stats.retracted;
        } else if (e.kind == "promise-stale") {
            ++report.promise_stats.stale;
        } else if (e.kind == "objective-reached") {
            report.makespan = e.t;
        } else if (e.kind == "invariant-violation") {
            ++report.invariant_violations;
        }
    }
    return report;
}

std::string format_report(const RunReport& r) {
    std::ostringstream out;
    out << "scenario   " << r.scenario << "\n";
    out << "seed       " << r.seed << "\n";
    out << "promises   " << (r.promises ? "on" : "off") << "\n";
    if (r.makespan) {
        out << "makespan   " << *r.makespan << " ticks (" << fixed(static_cast<double>(*r.makespan) / kTicksPerSecond, 1) << " s)\n";
    } else {
        out << "makespan   - (objective not reached by tick " << r.end_time << ")\n";
    }
    out << "events     " << r.events << "\n";
    out << "violations " << r.invariant_violations << "\n";
    out << "\npromises: issued " << r.promise_stats.issued << ", used in formulation "
        << r.promise_stats.used_in_formulation << ", stale " << r.promise_stats.stale << ", retracted "
        << r.promise_stats.retracted << "\n";
    out << "\nagents:\n";
    const Time horizon = std::max<Time>(r.makespan.value_or(r.end_time), 1);
    for (const auto& a : r.agents) {
        out << "  " << a.agent << "  goals " << a.goals << ", busy " << a.busy << " ticks, utilization "
            << fixed(100.0 * static_cast<double>(a.busy) / static_cast<double>(horizon), 1) << "%\n";
    }
    out << "\ngoals:\n";
    for (const auto& g : r.goals) {
        out << "  " << g.agent << "  " << g.label << "  formulated " << g.formulated << ", dispatched "
            << g.dispatched << ", " << g.outcome;
        if (g.ended) {
            out << " " << *g.ended;
        }
        if (g.promise_dependent) {
            out << "  [promise]";
        }
        out << "\n";
    }
    return out.str();
}

std::string format_gantt(const RunReport& r, std::size_t width) {
    std::ostringstream out;
    const Time horizon = std::max<Time>(r.makespan.value_or(r.end_time), 1);
    const double per_col = static_cast<double>(horizon) / static_cast<double>(width);
    out << r.scenario << " (promises " << (r.promises ? "on" : "off") << "), 0.." << horizon << " ticks, "
        << fixed(per_col, 1) << " ticks per column\n";
    if (r.goals.empty()) {
        return out.str();
    }
    std::size_t name_width = 0;
    for (const auto& a : r.agents) {
        name_width = std::max(name_width, a.agent.size());
    }
    auto column = [&](Time t) {
        const auto c = static_cast<std::size_t>(static_cast<double>(std::min(t, horizon)) / per_col);
        return std::min(c, width);
    };
    for (const auto& a : r.agents) {
        std::string row(width, ' ');
        std::size_t index = 0;
        for (const auto& g : r.goals) {
            if (g.agent != a.agent) {
                continue;
            }
            const std::size_t from = column(g.dispatched);
            const std::size_t to = std::max(column(g.ended.value_or(horizon)), from + 1);
            const char fill = g.promise_dependent ? '/' : '=';
            for (std::size_t c = from; c < std::min(to, width); ++c) {
                row[c] = fill;
            }
            if (from < width) {
                row[from] = static_cast<char>('a' + index % 26);
            }
            ++index;
        }
        out << a.agent << std::string(name_width - a.agent.size(), ' ') << " |" << row << "|\n";
    }
    out << "\n";
    for (const auto& a : r.agents) {
        std::size_t index = 0;
        for (const auto& g : r.goals) {
            if (g.agent != a.agent) {
                continue;
            }
            out << a.agent << " " << static_cast<char>('a' + index % 26) << "  " << g.label << "  " << g.dispatched
                << ".." << (g.ended ? std::to_string(*g.ended) : std::string("?")) << " " << g.outcome
                << (g.promise_dependent ? "  [promise]" : "") << "\n";
            ++index;
        }
    }
    out << "\n'=' goal span, '/' goal formulated from promises\n";
    return out.str();
}

Comparison compare(const RunReport& a, const RunReport& b) {
    if (a.scenario != b.scenario) {
        throw Error("cannot compare runs of different scenarios: '" + a.scenario + "' and '" + b.scenario + "'");
    }
    if (!a.promises && !b.promises) {
        throw Error("both runs have promises disabled; need one run with promises");
    }
    const RunReport& baseline = (!a.promises || b.promises) ? a : b;
    const RunReport& treated = (&baseline == &a) ? b : a;
    if (!baseline.makespan || !treated.makespan) {
        throw Error("a run did not reach its objective");
    }
    Comparison c;
    c.scenario = a.scenario;
    c.baseline_makespan = *baseline.makespan;
    c.promises_makespan = *treated.makespan;
    c.delta = c.promises_makespan - c.baseline_makespan;
    c.relative = c.baseline_makespan == 0
                     ? 0.0
                     : static_cast<double>(c.delta) / static_cast<double>(c.baseline_makespan);
    for (const auto& [label, t] : baseline.first_formulated) {
        const auto it = treated.first_formulated.find(label);
        if (it != treated.first_formulated.end()) {
            c.formulation_deltas.push_back({label, t, it->second});
        }
    }
    return c;
}

std::string format_comparison(const Comparison& c) {
    std::ostringstream out;
    out << "scenario            " << c.scenario << "\n";
    out << "makespan baseline   " << c.baseline_makespan << "\n";
    out << "makespan promises   " << c.promises_makespan << "\n";
    out << "delta               " << c.delta << " (" << fixed(100.0 * c.relative, 2) << "%)\n";
    out << "\nfirst formulation (baseline -> promises):\n";
    for (const auto& d : c.formulation_deltas) {
        out << "  " << d.label << "  " << d.baseline << " -> " << d.promises << "  (" << (d.promises - d.baseline)
            << ")\n";
    }
    return out.str();
}

SampleStats sample_stats(std::span<const double> values) {
    SampleStats s;
    if (values.empty()) {
        return s;
    }
    for (double v : values) {
        s.mean += v;
    }
    s.mean /= static_cast<double>(values.size());
    if (values.size() > 1) {
        double sq = 0.0;
        for (double v : values) {
            sq += (v - s.mean) * (v - s.mean);
        }
        s.stddev = std::sqrt(sq / static_cast<double>(values.size() - 1));
    }
    return s;
}

} // namespace pledge
