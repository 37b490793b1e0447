#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pledge/time.hpp"
#include "pledge/world.hpp"

namespace pledge {

/// A literal the goal promises on dispatch. Without an explicit offset the
/// promise time is dispatch time plus the operator's estimated duration.
struct PromiseTemplate {
    Literal literal;
    std::optional<Time> offset;

    auto operator<=>(const PromiseTemplate&) const = default;
};

/// Parameterized goal schema. Literal and resource patterns refer to
/// parameters as `?name`; parameter names are stored without the `?`.
struct GoalOperator {
    std::string class_name;
    std::vector<TypedParam> params;
    Time lookahead = 0;
    std::vector<Literal> precondition;
    std::vector<Literal> objective;
    std::vector<PromiseTemplate> promises;
    Time est_duration = 0;
    std::vector<std::string> resources;
    int priority = 0;
    /// Parameter bound to the formulating agent, if any.
    std::optional<std::string> agent_param;

    /// Throws ConfigError when a pattern uses a variable that is not a parameter
    /// or a numeric field is out of range.
    void validate() const;
    std::size_t param_index(const std::string& name) const;
    Time promise_offset(const PromiseTemplate& tmpl) const { return tmpl.offset.value_or(est_duration); }
};

/// Parameter values aligned with GoalOperator::params.
using Binding = std::vector<std::string>;

/// Replaces `?param` arguments using `binding`. Throws ConfigError on an unbound variable.
Literal ground_literal(const Literal& pattern, const GoalOperator& op, const Binding& binding);
std::string ground_resource(const std::string& pattern, const GoalOperator& op, const Binding& binding);

inline bool is_variable(const std::string& s) { return !s.empty() && s.front() == '?'; }

} // namespace pledge
