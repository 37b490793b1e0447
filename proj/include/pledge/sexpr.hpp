#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace pledge::sexpr {

enum class Kind { symbol, string, list };

/// One node of a parsed S-expression. Symbols keep their original spelling;
/// comparisons against keywords are case-insensitive via `is()`.
struct Node {
    Kind kind = Kind::symbol;
    std::string text;
    std::vector<Node> items;
    int line = 1;
    int column = 1;

    bool is_list() const noexcept { return kind == Kind::list; }
    bool is_symbol() const noexcept { return kind == Kind::symbol; }
    bool is_string() const noexcept { return kind == Kind::string; }
    bool is(std::string_view keyword) const;
    /// Head symbol of a list, or empty when the list is empty or headed by a list.
    std::string_view head() const;
};

/// Parses every top-level expression in `text`. Throws ParseError.
std::vector<Node> parse_all(std::string_view text, const std::string& source, int line = 1, int column = 1);

/// Parses exactly one expression.
Node parse_one(std::string_view text, const std::string& source, int line = 1, int column = 1);

std::string to_text(const Node& node);

bool iequals(std::string_view a, std::string_view b);

} // namespace pledge::sexpr
