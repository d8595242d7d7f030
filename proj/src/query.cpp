#include "rulemc/query.hpp"

#include <cctype>

namespace rulemc {

namespace {

// Hand-rolled scanner over the single-line query text. Everything reports
// 1-based columns through ParseError (line is always 1).
class QueryParser {
public:
    QueryParser(std::string_view text, const RuleBase& rb) : text_(text), rb_(rb) {}

    Query parse() {
        Query q;
        q.text = std::string(text_);
        skip_ws();
        if (eat("E<>")) {
            q.quant = Query::Quant::EF;
        } else if (eat("A[]")) {
            q.quant = Query::Quant::AG;
        } else {
            fail(col(), "expected 'E<>' or 'A[]'");
        }
        q.pred = parse_or();
        skip_ws();
        if (pos_ < text_.size()) fail(col(), "unexpected trailing input");
        return q;
    }

private:
    StatePredicate parse_or() {
        StatePredicate p = parse_and();
        while (eat_word("or")) p = StatePredicate::disj(std::move(p), parse_and());
        return p;
    }

    StatePredicate parse_and() {
        StatePredicate p = parse_factor();
        while (eat_word("and")) p = StatePredicate::conj(std::move(p), parse_factor());
        return p;
    }

    StatePredicate parse_factor() {
        skip_ws();
        if (eat_word("not")) return StatePredicate::neg(parse_factor());
        if (eat("(")) {
            StatePredicate p = parse_or();
            skip_ws();
            if (!eat(")")) fail(col(), "expected ')'");
            return p;
        }
        if (eat_word("true")) return StatePredicate::truth();
        if (eat_word("false")) return StatePredicate::falsity();
        if (eat_word("forall")) return parse_forall();
        if (eat_word("es1") || eat_word("es2")) {
            const int process = text_[pos_ - 1] == '1' ? 1 : 2;
            if (!eat(".")) fail(col(), "expected '.' after process name");
            return StatePredicate::at_loc(process, parse_location());
        }
        if (peek_is("r[")) return parse_rule_flag();
        fail(col(), "expected a state formula");
    }

    // forall (i:typem) r[i]==true
    StatePredicate parse_forall() {
        skip_ws();
        if (!eat("(")) fail(col(), "expected '(' after 'forall'");
        std::string var = parse_ident();
        skip_ws();
        if (!eat(":")) fail(col(), "expected ':' in forall binder");
        skip_ws();
        if (!eat("typem")) fail(col(), "expected 'typem' in forall binder");
        skip_ws();
        if (!eat(")")) fail(col(), "expected ')' after forall binder");
        skip_ws();
        if (!eat("r[")) fail(col(), "expected 'r[' after forall binder");
        skip_ws();
        const int bound_col = col();
        std::string bound = parse_ident();
        if (bound != var) fail(bound_col, "forall body must index r with '" + var + "'");
        skip_ws();
        if (!eat("]")) fail(col(), "expected ']'");
        skip_ws();
        if (!eat("==")) fail(col(), "expected '=='");
        skip_ws();
        if (!eat_word("true")) fail(col(), "forall body must compare against 'true'");
        return StatePredicate::all_rules_used();
    }

    StatePredicate parse_rule_flag() {
        eat("r[");
        skip_ws();
        const int idx_col = col();
        int index = parse_int();
        if (index < 0 || index >= rb_.rule_count())
            fail(idx_col, "rule index " + std::to_string(index) + " out of range (rule base has " +
                              std::to_string(rb_.rule_count()) + " rules)");
        skip_ws();
        if (!eat("]")) fail(col(), "expected ']'");
        skip_ws();
        if (!eat("==")) fail(col(), "expected '=='");
        skip_ws();
        if (eat_word("true")) return StatePredicate::rule_used(index);
        if (eat_word("false")) return StatePredicate::neg(StatePredicate::rule_used(index));
        fail(col(), "expected 'true' or 'false'");
    }

    Location parse_location() {
        const int loc_col = col();
        std::string name = parse_ident_with_digits();
        if (name == "start") return Location::start();
        if (name == "rs") return Location::rs();
        if (name == "rf") return Location::rf();
        if (const Rule* r = find_rule(rb_, name)) return Location::rule(r->id);
        fail(loc_col, "unknown location '" + name + "'");
    }

    std::string parse_ident() {
        skip_ws();
        const int start_col = col();
        size_t start = pos_;
        while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ == start) fail(start_col, "expected an identifier");
        return std::string(text_.substr(start, pos_ - start));
    }

    std::string parse_ident_with_digits() {
        skip_ws();
        const int start_col = col();
        size_t start = pos_;
        while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ == start) fail(start_col, "expected a location name");
        return std::string(text_.substr(start, pos_ - start));
    }

    int parse_int() {
        skip_ws();
        const int start_col = col();
        size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ == start) fail(start_col, "expected a number");
        if (pos_ - start > 6) fail(start_col, "index too large");
        int value = 0;
        for (size_t i = start; i < pos_; ++i) value = value * 10 + (text_[i] - '0');
        return value;
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool peek_is(std::string_view s) {
        skip_ws();
        return text_.substr(pos_).substr(0, s.size()) == s;
    }

    bool eat(std::string_view s) {
        skip_ws();
        if (text_.substr(pos_).substr(0, s.size()) != s) return false;
        pos_ += s.size();
        return true;
    }

    // A keyword match that must not run into a larger identifier.
    bool eat_word(std::string_view word) {
        skip_ws();
        if (text_.substr(pos_).substr(0, word.size()) != word) return false;
        const size_t after = pos_ + word.size();
        if (after < text_.size() && std::isalnum(static_cast<unsigned char>(text_[after])))
            return false;
        pos_ = after;
        return true;
    }

    int col() const { return static_cast<int>(pos_) + 1; }

    [[noreturn]] void fail(int column, const std::string& msg) const {
        throw ParseError(1, column, msg);
    }

    std::string_view text_;
    const RuleBase& rb_;
    size_t pos_ = 0;
};

}  // namespace

Query parse_query(std::string_view text, const RuleBase& rb) {
    return QueryParser(text, rb).parse();
}

}  // namespace rulemc
