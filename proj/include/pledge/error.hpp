#pragma once

#include <stdexcept>
#include <string>

namespace pledge {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Unknown predicate, object, or type, or an arity mismatch.
class SignatureError : public Error {
public:
    using Error::Error;
};

/// Invalid goal-operator, scenario, or domain configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A caller broke an operation's precondition.
class ContractViolation : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(std::string source, int line, int column, const std::string& message)
        : Error(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          source_(std::move(source)),
          line_(line),
          column_(column) {}

    const std::string& source() const noexcept { return source_; }
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    std::string source_;
    int line_;
    int column_;
};

} // namespace pledge
