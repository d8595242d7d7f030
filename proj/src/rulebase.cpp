#include "rulemc/rulebase.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace rulemc {

namespace {

constexpr int kMaxIndexDigits = 6;  // indices above 999999 are rejected

struct Token {
    enum class Kind { Name, Prop, Colon, Arrow, Tilde, Amp, Pipe, LParen, RParen, End };

    Kind kind = Kind::End;
    int value = 0;      // Prop index
    std::string text;   // Name spelling
    int col = 0;        // 1-based byte column
};

const char* token_desc(Token::Kind k) {
    switch (k) {
        case Token::Kind::Name: return "rule name";
        case Token::Kind::Prop: return "proposition";
        case Token::Kind::Colon: return "':'";
        case Token::Kind::Arrow: return "'->'";
        case Token::Kind::Tilde: return "'~'";
        case Token::Kind::Amp: return "'&'";
        case Token::Kind::Pipe: return "'|'";
        case Token::Kind::LParen: return "'('";
        case Token::Kind::RParen: return "')'";
        case Token::Kind::End: return "end of line";
    }
    return "?";
}

// Tokenizes a single rule line. Unicode logic operators are aliases for
// the ASCII ones.
class Lexer {
public:
    Lexer(std::string_view text, int line) : text_(text), line_(line) { cur_ = lex(); }

    const Token& peek() const { return cur_; }

    Token next() {
        Token t = cur_;
        cur_ = lex();
        return t;
    }

    Token expect(Token::Kind kind) {
        if (cur_.kind != kind) {
            fail(cur_.col, std::string("expected ") + token_desc(kind) + ", found " +
                               token_desc(cur_.kind));
        }
        return next();
    }

    [[noreturn]] void fail(int col, const std::string& msg) const {
        throw ParseError(line_, col, msg);
    }

private:
    bool starts_with(std::string_view prefix) const {
        return text_.substr(pos_).substr(0, prefix.size()) == prefix;
    }

    Token lex() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
        const int col = static_cast<int>(pos_) + 1;
        if (pos_ >= text_.size()) return {Token::Kind::End, 0, "", col};

        const char c = text_[pos_];
        switch (c) {
            case ':': ++pos_; return {Token::Kind::Colon, 0, "", col};
            case '~': ++pos_; return {Token::Kind::Tilde, 0, "", col};
            case '&': ++pos_; return {Token::Kind::Amp, 0, "", col};
            case '|': ++pos_; return {Token::Kind::Pipe, 0, "", col};
            case '(': ++pos_; return {Token::Kind::LParen, 0, "", col};
            case ')': ++pos_; return {Token::Kind::RParen, 0, "", col};
            default: break;
        }
        if (starts_with("->")) { pos_ += 2; return {Token::Kind::Arrow, 0, "", col}; }
        if (starts_with("→")) { pos_ += 3; return {Token::Kind::Arrow, 0, "", col}; }  // →
        if (starts_with("∧")) { pos_ += 3; return {Token::Kind::Amp, 0, "", col}; }    // ∧
        if (starts_with("∨")) { pos_ += 3; return {Token::Kind::Pipe, 0, "", col}; }   // ∨
        if (starts_with("¬")) { pos_ += 2; return {Token::Kind::Tilde, 0, "", col}; }  // ¬
        if (starts_with("∼")) { pos_ += 3; return {Token::Kind::Tilde, 0, "", col}; }  // ∼

        if ((c == 'p' || c == 'r') && pos_ + 1 < text_.size() &&
            std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
            size_t start = pos_++;
            size_t digits = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
            if (pos_ - digits > kMaxIndexDigits) fail(col, "index too large");
            int value = 0;
            for (size_t i = digits; i < pos_; ++i) value = value * 10 + (text_[i] - '0');
            if (c == 'p') return {Token::Kind::Prop, value, "", col};
            return {Token::Kind::Name, value, std::string(text_.substr(start, pos_ - start)), col};
        }
        fail(col, std::string("unexpected character '") + c + "'");
    }

    std::string_view text_;
    int line_;
    size_t pos_ = 0;
    Token cur_;
};

class RuleParser {
public:
    RuleParser(std::string_view line_text, int line) : lex_(line_text, line) {}

    Rule parse(int id, const std::set<std::string>& taken_names) {
        Rule rule;
        rule.id = id;
        Token name = lex_.expect(Token::Kind::Name);
        if (taken_names.count(name.text))
            lex_.fail(name.col, "duplicate rule name '" + name.text + "'");
        rule.name = name.text;
        lex_.expect(Token::Kind::Colon);
        rule.lhs = parse_formula();
        lex_.expect(Token::Kind::Arrow);
        rule.rhs = parse_rhs();
        if (lex_.peek().kind != Token::Kind::End)
            lex_.fail(lex_.peek().col, "unexpected trailing input");
        return rule;
    }

private:
    // formula := conj ("|" conj)*
    Formula parse_formula() {
        Formula f = parse_conj();
        while (lex_.peek().kind == Token::Kind::Pipe) {
            lex_.next();
            f = Formula::combine(Formula::Kind::Or, std::move(f), parse_conj());
        }
        return f;
    }

    // conj := atom ("&" atom)*
    Formula parse_conj() {
        Formula f = parse_atom();
        while (lex_.peek().kind == Token::Kind::Amp) {
            lex_.next();
            f = Formula::combine(Formula::Kind::And, std::move(f), parse_atom());
        }
        return f;
    }

    // atom := "~"? prop | "(" formula ")"
    Formula parse_atom() {
        const Token& t = lex_.peek();
        if (t.kind == Token::Kind::Tilde) {
            lex_.next();
            Token p = lex_.expect(Token::Kind::Prop);
            return Formula::make_lit({p.value, true});
        }
        if (t.kind == Token::Kind::Prop) {
            Token p = lex_.next();
            return Formula::make_lit({p.value, false});
        }
        if (t.kind == Token::Kind::LParen) {
            lex_.next();
            Formula f = parse_formula();
            lex_.expect(Token::Kind::RParen);
            return f;
        }
        lex_.fail(t.col, std::string("expected proposition or '(', found ") + token_desc(t.kind));
    }

    // rhs := lit ("&" lit)*, literals only, no duplicate or complementary
    // propositions
    std::vector<Literal> parse_rhs() {
        std::vector<Literal> rhs;
        std::map<int, bool> seen;  // prop -> negated
        while (true) {
            const Token& t = lex_.peek();
            if (t.kind == Token::Kind::Pipe)
                lex_.fail(t.col, "disjunction is not allowed in the RHS of a rule");

            bool negated = false;
            int col = t.col;
            if (t.kind == Token::Kind::Tilde) {
                lex_.next();
                negated = true;
            }
            if (lex_.peek().kind != Token::Kind::Prop)
                lex_.fail(lex_.peek().col, std::string("expected proposition in RHS, found ") +
                                               token_desc(lex_.peek().kind));
            Token p = lex_.next();
            auto [it, inserted] = seen.emplace(p.value, negated);
            if (!inserted) {
                if (it->second == negated)
                    lex_.fail(col, "duplicate literal for p" + std::to_string(p.value) + " in RHS");
                lex_.fail(col, "complementary literals over p" + std::to_string(p.value) + " in RHS");
            }
            rhs.push_back({p.value, negated});

            if (lex_.peek().kind == Token::Kind::Amp) {
                lex_.next();
                continue;
            }
            if (lex_.peek().kind == Token::Kind::Pipe)
                lex_.fail(lex_.peek().col, "disjunction is not allowed in the RHS of a rule");
            break;
        }
        return rhs;
    }

    Lexer lex_;
};

int formula_max_prop(const Formula& f, int node) {
    if (node < 0) return -1;
    const auto& n = f.nodes[node];
    if (n.kind == Formula::Kind::Lit) return n.lit.prop;
    return std::max(formula_max_prop(f, n.left), formula_max_prop(f, n.right));
}

bool nodes_equal(const Formula& a, int na, const Formula& b, int nb) {
    if (na < 0 || nb < 0) return na == nb;
    const auto& x = a.nodes[na];
    const auto& y = b.nodes[nb];
    if (x.kind != y.kind) return false;
    if (x.kind == Formula::Kind::Lit) return x.lit == y.lit;
    return nodes_equal(a, x.left, b, y.left) && nodes_equal(a, x.right, b, y.right);
}

// Precedence: | = 0, & = 1, literal = 2. Parenthesize a child that binds
// looser than its context requires.
void render(const Formula& f, int node, int min_prec, std::string& out) {
    const auto& n = f.nodes[node];
    switch (n.kind) {
        case Formula::Kind::Lit:
            if (n.lit.negated) out += '~';
            out += 'p';
            out += std::to_string(n.lit.prop);
            return;
        case Formula::Kind::And:
        case Formula::Kind::Or: {
            const int prec = n.kind == Formula::Kind::And ? 1 : 0;
            const char* op = n.kind == Formula::Kind::And ? " & " : " | ";
            const bool parens = prec < min_prec;
            if (parens) out += '(';
            render(f, n.left, prec, out);
            out += op;
            // right child gets parens at equal precedence so right-nested
            // trees survive the left-associative reparse
            render(f, n.right, prec + 1, out);
            if (parens) out += ')';
            return;
        }
    }
}

// Structural sanity of a hand-built formula arena: indices in range,
// literal leaves, binary connectives.
bool formula_well_formed(const Formula& f, int node, int depth = 0) {
    if (node < 0 || node >= static_cast<int>(f.nodes.size())) return false;
    if (depth > static_cast<int>(f.nodes.size())) return false;  // cycle guard
    const auto& n = f.nodes[node];
    if (n.kind == Formula::Kind::Lit) return n.lit.prop >= 0;
    return formula_well_formed(f, n.left, depth + 1) && formula_well_formed(f, n.right, depth + 1);
}

}  // namespace

Formula Formula::make_lit(Literal l) {
    Formula f;
    f.nodes.push_back({Kind::Lit, l, -1, -1});
    f.root = 0;
    return f;
}

Formula Formula::combine(Kind op, Formula lhs, Formula rhs) {
    const int offset = static_cast<int>(lhs.nodes.size());
    for (Node n : rhs.nodes) {
        if (n.left >= 0) n.left += offset;
        if (n.right >= 0) n.right += offset;
        lhs.nodes.push_back(n);
    }
    lhs.nodes.push_back({op, {}, lhs.root, rhs.root + offset});
    lhs.root = static_cast<int>(lhs.nodes.size()) - 1;
    return lhs;
}

int Formula::max_prop() const { return formula_max_prop(*this, root); }

bool structurally_equal(const Formula& a, const Formula& b) {
    return nodes_equal(a, a.root, b, b.root);
}

std::string to_text(const Formula& f) {
    std::string out;
    if (f.root >= 0) render(f, f.root, 0, out);
    return out;
}

bool structurally_equal(const RuleBase& a, const RuleBase& b) {
    if (a.prop_count != b.prop_count || a.rules.size() != b.rules.size()) return false;
    for (size_t i = 0; i < a.rules.size(); ++i) {
        const Rule& x = a.rules[i];
        const Rule& y = b.rules[i];
        if (x.id != y.id || x.name != y.name || x.rhs != y.rhs) return false;
        if (!structurally_equal(x.lhs, y.lhs)) return false;
    }
    return true;
}

const Rule* find_rule(const RuleBase& rb, std::string_view name) {
    for (const Rule& r : rb.rules)
        if (r.name == name) return &r;
    return nullptr;
}

ParseError::ParseError(int line, int column, const std::string& message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

RuleBase parse_rule_base(std::string_view source) {
    RuleBase rb;
    std::set<std::string> names;
    int max_prop = -1;

    int lineno = 0;
    size_t pos = 0;
    while (pos <= source.size()) {
        size_t eol = source.find('\n', pos);
        std::string_view line = source.substr(pos, eol == std::string_view::npos ? std::string_view::npos
                                                                                 : eol - pos);
        pos = eol == std::string_view::npos ? source.size() + 1 : eol + 1;
        ++lineno;

        if (size_t hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        RuleParser parser(line, lineno);
        Rule rule = parser.parse(rb.rule_count(), names);
        names.insert(rule.name);
        max_prop = std::max(max_prop, rule.lhs.max_prop());
        for (const Literal& lit : rule.rhs) max_prop = std::max(max_prop, lit.prop);
        rb.rules.push_back(std::move(rule));
    }

    if (rb.rules.empty()) throw ParseError(lineno, 1, "empty rule base: no rules found");
    rb.prop_count = max_prop + 1;
    return rb;
}

std::vector<Diagnostic> validate(const RuleBase& rb) {
    std::vector<Diagnostic> out;
    if (rb.rules.empty()) {
        out.push_back({"", "rule base has no rules"});
        return out;
    }
    if (rb.prop_count < 1) out.push_back({"", "prop_count must be at least 1"});

    std::set<std::string> names;
    for (size_t i = 0; i < rb.rules.size(); ++i) {
        const Rule& r = rb.rules[i];
        if (r.id != static_cast<int>(i))
            out.push_back({r.name, "rule id " + std::to_string(r.id) + " of " + r.name +
                                       " does not match declaration order " + std::to_string(i)});
        if (r.name.empty()) out.push_back({r.name, "rule " + std::to_string(i) + " has no name"});
        if (!names.insert(r.name).second)
            out.push_back({r.name, "duplicate rule name '" + r.name + "'"});

        if (r.lhs.empty() || !formula_well_formed(r.lhs, r.lhs.root))
            out.push_back({r.name, "empty or malformed LHS of " + r.name});
        else if (r.lhs.max_prop() >= rb.prop_count)
            out.push_back({r.name, "proposition index out of range in LHS of " + r.name});

        if (r.rhs.empty()) {
            out.push_back({r.name, "empty RHS of " + r.name});
            continue;
        }
        std::map<int, bool> seen;
        for (const Literal& lit : r.rhs) {
            if (lit.prop < 0 || lit.prop >= rb.prop_count) {
                out.push_back({r.name, "proposition index out of range in RHS of " + r.name});
                continue;
            }
            auto [it, inserted] = seen.emplace(lit.prop, lit.negated);
            if (!inserted)
                out.push_back({r.name, it->second == lit.negated
                                           ? "duplicate literal in RHS of " + r.name
                                           : "complementary literals in RHS of " + r.name});
        }
    }
    return out;
}

std::string to_text(const RuleBase& rb) {
    std::string out;
    for (const Rule& r : rb.rules) {
        out += r.name;
        out += ": ";
        out += to_text(r.lhs);
        out += " -> ";
        for (size_t i = 0; i < r.rhs.size(); ++i) {
            if (i) out += " & ";
            if (r.rhs[i].negated) out += '~';
            out += 'p';
            out += std::to_string(r.rhs[i].prop);
        }
        out += '\n';
    }
    return out;
}

}  // namespace rulemc
