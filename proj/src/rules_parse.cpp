#include <cctype>
#include <cstdlib>
#include <string>

#include "synergy/rules.hpp"

namespace synergy {

ParseError::ParseError(int line, int col, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", col " + std::to_string(col) + ": " + message),
      line_(line),
      col_(col) {}

namespace {

struct Cursor {
    std::string_view text;
    std::size_t pos = 0;
    int line;

    void skip_blanks() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    }
    bool done() {
        skip_blanks();
        return pos >= text.size();
    }
    char peek() {
        skip_blanks();
        return pos < text.size() ? text[pos] : '\0';
    }
    int col() const { return int(pos) + 1; }

    [[noreturn]] void fail(const std::string& message) { throw ParseError(line, col(), message); }

    bool eat(char c) {
        if (peek() != c) return false;
        ++pos;
        return true;
    }
    void expect(char c, const std::string& what) {
        if (!eat(c)) fail("expected '" + std::string(1, c) + "' " + what);
    }

    std::string name() {
        skip_blanks();
        std::size_t start = pos;
        while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            ++pos;
        if (pos == start) fail("expected a name");
        return std::string(text.substr(start, pos - start));
    }

    int integer() {
        skip_blanks();
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == start) fail("expected an integer");
        return std::atoi(std::string(text.substr(start, pos - start)).c_str());
    }

    // signed decimal; cursor must sit at a digit, '.', '+' or '-'
    double number() {
        skip_blanks();
        const char* begin = text.data() + pos;
        char* end = nullptr;
        double value = std::strtod(begin, &end);
        if (end == begin) fail("expected a number");
        pos += std::size_t(end - begin);
        return value;
    }

    bool at_number() {
        char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return true;
        if (c == '+' || c == '-') {
            std::size_t next = pos + 1;
            while (next < text.size() && (text[next] == ' ' || text[next] == '\t')) ++next;
            return next < text.size() &&
                   (std::isdigit(static_cast<unsigned char>(text[next])) || text[next] == '.');
        }
        return false;
    }
};

RulePattern parse_pattern(Cursor& cur, const TypeTable& types) {
    int at = cur.col();
    std::string name = cur.name();
    const InfoType* type = types.find(name);
    if (!type) throw ParseError(cur.line, at, "unknown type: " + name);
    RulePattern pattern;
    pattern.type = name;
    cur.expect('(', "after type name");
    while (true) {
        pattern.slots.push_back(cur.name());
        if (cur.eat(')')) break;
        cur.expect(',', "between variables");
    }
    if (int(pattern.slots.size()) != type->arity)
        throw ParseError(cur.line, at,
                         "type " + name + " expects " + std::to_string(type->arity) + " arguments, got " +
                             std::to_string(pattern.slots.size()));
    return pattern;
}

// term := [coeff "*"] atom, with a bare "-" shorthand for -1
RuleTerm parse_term(Cursor& cur, const TypeTable& types) {
    RuleTerm term;
    int at = cur.col();
    if (cur.at_number()) {
        term.coeff = cur.number();
        cur.expect('*', "between coefficient and atom");
    } else if (cur.peek() == '-') {
        cur.eat('-');
        term.coeff = -1.0;
    }
    if (term.coeff == 0.0) throw ParseError(cur.line, at, "zero coefficient");
    term.pattern = parse_pattern(cur, types);
    return term;
}

void parse_rule_line(Cursor& cur, RuleSet& out) {
    Rule rule;
    rule.rhs = parse_pattern(cur, out.types);
    cur.skip_blanks();
    if (!(cur.eat('<') && cur.eat('-'))) cur.fail("expected '<-' after rule head");
    int lhs_at = cur.col();
    rule.lhs.push_back(parse_term(cur, out.types));
    while (!cur.done()) {
        cur.expect('+', "between terms");
        rule.lhs.push_back(parse_term(cur, out.types));
    }

    for (std::size_t i = 0; i < rule.lhs.size(); ++i) {
        if (rule.lhs[i].pattern == rule.rhs)
            throw ParseError(cur.line, lhs_at, "rule head repeats on the left-hand side");
        for (std::size_t j = i + 1; j < rule.lhs.size(); ++j)
            if (rule.lhs[i].pattern == rule.lhs[j].pattern)
                throw ParseError(cur.line, lhs_at,
                                 "duplicate pattern " + rule.lhs[i].pattern.type + "(...) on the left-hand side");
    }
    for (const std::string& var : rule.rhs.slots) {
        bool bound = false;
        for (const RuleTerm& term : rule.lhs)
            for (const std::string& slot : term.pattern.slots)
                if (slot == var) bound = true;
        if (!bound) throw ParseError(cur.line, 1, "head variable " + var + " does not appear on the left");
    }
    out.rules.push_back(std::move(rule));
}

}  // namespace

RuleSet parse_rules(std::string_view text) {
    RuleSet out;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? eol : eol - pos);
        ++line_no;
        if (std::size_t hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);

        Cursor cur{line, 0, line_no};
        if (!cur.done()) {
            // peek the first word without consuming for the rule path
            std::size_t mark = cur.pos;
            std::string word = cur.name();
            if (word == "type") {
                std::string name = cur.name();
                cur.expect('/', "after type name");
                int arity = cur.integer();
                std::string dim_kw = cur.name();
                if (dim_kw != "dim") cur.fail("expected 'dim'");
                int dim = cur.integer();
                if (!cur.done()) cur.fail("trailing input after type declaration");
                try {
                    out.types.add(InfoType{name, arity, dim});
                } catch (const std::invalid_argument& e) {
                    throw ParseError(line_no, 1, e.what());
                }
            } else {
                cur.pos = mark;
                parse_rule_line(cur, out);
            }
        }
        if (eol == std::string_view::npos) break;
        pos = eol + 1;
    }
    out.saturated = false;
    return out;
}

const std::string& default_rules_text() {
    static const std::string text = R"(# Planar position rules.
# Value conventions: G(X) is the position of X, R(X,Y) = G(X) - G(Y),
# C2/C3 are member-position means, M(X,Y,Z) = G(Z) - (G(X) + G(Y))/2.

type G/1 dim 2
type R/2 dim 2
type C2/2 dim 2
type C3/3 dim 2
type M/3 dim 2

# position composition
G(Y) <- 1*G(X) + 1*R(Y,X)
# reversal
R(X,Y) <- -1*R(Y,X)
# difference through a shared reference
R(X,Y) <- 1*R(X,Z) + -1*R(Y,Z)
# three-member centroid from member positions
C3(X,Y,Z) <- 0.3333333333333333*G(X) + 0.3333333333333333*G(Y) + 0.3333333333333333*G(Z)
# pair centroid from member positions
C2(X,Y) <- 0.5*G(X) + 0.5*G(Y)
# relay offset from the relative positions to the endpoints
M(X,Y,Z) <- -0.5*R(X,Z) + -0.5*R(Y,Z)
)";
    return text;
}

RuleSet default_rules() { return parse_rules(default_rules_text()); }

}  // namespace synergy
