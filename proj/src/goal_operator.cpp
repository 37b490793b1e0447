#include "pledge/goal_operator.hpp"

#include "pledge/error.hpp"

namespace pledge {

std::size_t GoalOperator::param_index(const std::string& name) const {
    const std::string bare = is_variable(name) ? name.substr(1) : name;
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (params[i].name == bare) {
            return i;
        }
    }
    throw ConfigError("goal operator " + class_name + ": variable '" + name + "' is not a parameter");
}

void GoalOperator::validate() const {
    if (class_name.empty()) {
        throw ConfigError("goal operator without class name");
    }
    if (lookahead < 0) {
        throw ConfigError("goal operator " + class_name + ": lookahead-time must be >= 0");
    }
    if (est_duration < 0) {
        throw ConfigError("goal operator " + class_name + ": est-duration must be >= 0");
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
        for (std::size_t j = i + 1; j < params.size(); ++j) {
            if (params[i].name == params[j].name) {
                throw ConfigError("goal operator " + class_name + ": duplicate parameter '" + params[i].name + "'");
            }
        }
    }
    auto check = [&](const Literal& l) {
        for (const auto& arg : l.atom.args) {
            if (is_variable(arg)) {
                param_index(arg);
            }
        }
    };
    for (const auto& l : precondition) {
        check(l);
    }
    for (const auto& l : objective) {
        check(l);
    }
    for (const auto& p : promises) {
        check(p.literal);
        if (p.offset && *p.offset < 0) {
            throw ConfigError("goal operator " + class_name + ": negative promise offset");
        }
    }
    for (const auto& r : resources) {
        if (is_variable(r)) {
            param_index(r);
        }
    }
    if (agent_param) {
        param_index(*agent_param);
    }
}

Literal ground_literal(const Literal& pattern, const GoalOperator& op, const Binding& binding) {
    Literal out = pattern;
    for (auto& arg : out.atom.args) {
        if (is_variable(arg)) {
            arg = binding.at(op.param_index(arg));
        }
    }
    return out;
}

std::string ground_resource(const std::string& pattern, const GoalOperator& op, const Binding& binding) {
    return is_variable(pattern) ? binding.at(op.param_index(pattern)) : pattern;
}

} // namespace pledge
