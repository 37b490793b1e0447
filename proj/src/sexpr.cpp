#include "pledge/sexpr.hpp"

#include <cctype>

#include "pledge/error.hpp"

namespace pledge::sexpr {

bool iequals(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(a[i])) != std::tolower(static_cast<unsigned char>(b[i]))) {
            return false;
        }
    }
    return true;
}

bool Node::is(std::string_view keyword) const {
    return kind == Kind::symbol && iequals(text, keyword);
}

std::string_view Node::head() const {
    if (kind != Kind::list || items.empty() || !items.front().is_symbol()) {
        return {};
    }
    return items.front().text;
}

namespace {

class Reader {
public:
    Reader(std::string_view text, const std::string& source, int line, int column)
        : text_(text), source_(source), line_(line), column_(column) {}

    bool at_end() {
        skip_space();
        return pos_ >= text_.size();
    }

    Node read() {
        skip_space();
        if (pos_ >= text_.size()) {
            fail("unexpected end of input");
        }
        Node node;
        node.line = line_;
        node.column = column_;
        const char c = text_[pos_];
        if (c == '(') {
            advance();
            node.kind = Kind::list;
            for (;;) {
                skip_space();
                if (pos_ >= text_.size()) {
                    throw ParseError(source_, node.line, node.column, "unbalanced '('");
                }
                if (text_[pos_] == ')') {
                    advance();
                    break;
                }
                node.items.push_back(read());
            }
            return node;
        }
        if (c == ')') {
            fail("unexpected ')'");
        }
        if (c == '"') {
            advance();
            node.kind = Kind::string;
            while (pos_ < text_.size() && text_[pos_] != '"') {
                node.text.push_back(text_[pos_]);
                advance();
            }
            if (pos_ >= text_.size()) {
                throw ParseError(source_, node.line, node.column, "unterminated string");
            }
            advance();
            return node;
        }
        node.kind = Kind::symbol;
        while (pos_ < text_.size()) {
            const char d = text_[pos_];
            if (std::isspace(static_cast<unsigned char>(d)) || d == '(' || d == ')' || d == ';' || d == '"') {
                break;
            }
            node.text.push_back(d);
            advance();
        }
        return node;
    }

    [[noreturn]] void fail(const std::string& message) const {
        throw ParseError(source_, line_, column_, message);
    }

private:
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    void skip_space() {
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (c == ';') {
                while (pos_ < text_.size() && text_[pos_] != '\n') {
                    advance();
                }
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    std::string_view text_;
    const std::string& source_;
    std::size_t pos_ = 0;
    int line_;
    int column_;
};

void write(const Node& node, std::string& out) {
    switch (node.kind) {
    case Kind::symbol:
        out += node.text;
        break;
    case Kind::string:
        out += '"';
        out += node.text;
        out += '"';
        break;
    case Kind::list:
        out += '(';
        for (std::size_t i = 0; i < node.items.size(); ++i) {
            if (i != 0) {
                out += ' ';
            }
            write(node.items[i], out);
        }
        out += ')';
        break;
    }
}

} // namespace

std::vector<Node> parse_all(std::string_view text, const std::string& source, int line, int column) {
    Reader reader(text, source, line, column);
    std::vector<Node> nodes;
    while (!reader.at_end()) {
        nodes.push_back(reader.read());
    }
    return nodes;
}

Node parse_one(std::string_view text, const std::string& source, int line, int column) {
    Reader reader(text, source, line, column);
    Node node = reader.read();
    if (!reader.at_end()) {
        reader.fail("trailing input after expression");
    }
    return node;
}

std::string to_text(const Node& node) {
    std::string out;
    write(node, out);
    return out;
}

} // namespace pledge::sexpr
