#ifndef RULEMC_RULEBASE_HPP
#define RULEMC_RULEBASE_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rulemc {

/// A proposition p<prop> or its negation ~p<prop>.
struct Literal {
    int prop = 0;
    bool negated = false;

    friend bool operator==(const Literal&, const Literal&) = default;
};

/// Propositional formula over literals with & and |, stored as a flat
/// node arena. `root` indexes into `nodes`; leaves are always literals.
struct Formula {
    enum class Kind : uint8_t { Lit, And, Or };

    struct Node {
        Kind kind = Kind::Lit;
        Literal lit;
        int left = -1;
        int right = -1;
    };

    std::vector<Node> nodes;
    int root = -1;

    static Formula make_lit(Literal l);
    static Formula combine(Kind op, Formula lhs, Formula rhs);

    bool empty() const { return root < 0; }
    /// Largest proposition index mentioned, or -1 for an empty formula.
    int max_prop() const;
};

bool structurally_equal(const Formula& a, const Formula& b);
std::string to_text(const Formula& f);

/// One inference rule: lhs -> rhs, rhs a conjunction of literals.
struct Rule {
    int id = 0;
    std::string name;
    Formula lhs;
    std::vector<Literal> rhs;
};

struct RuleBase {
    std::vector<Rule> rules;
    int prop_count = 0;

    int rule_count() const { return static_cast<int>(rules.size()); }
};

bool structurally_equal(const RuleBase& a, const RuleBase& b);

/// Lookup by rule name; nullptr if absent.
const Rule* find_rule(const RuleBase& rb, std::string_view name);

class ParseError : public std::runtime_error {
public:
    ParseError(int line, int column, const std::string& message);

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

/// Parse the rule DSL. One rule per line:
///
///     r0: p0 -> p1 & p4      # comment
///
/// LHS allows ~, &, | and parentheses (precedence ~ > & > |); the RHS is a
/// conjunction of literals. Unicode operators from the usual logic notation
/// are accepted as aliases for the ASCII ones. Throws ParseError with a
/// 1-based line/column on malformed input.
RuleBase parse_rule_base(std::string_view source);

struct Diagnostic {
    std::string rule;     // offending rule name, empty for base-level issues
    std::string message;
};

/// Check the structural invariants of a rule base built by hand.
/// parse_rule_base output always validates clean.
std::vector<Diagnostic> validate(const RuleBase& rb);

/// Render back to DSL text; parsing the result reproduces the rule base.
std::string to_text(const RuleBase& rb);

}  // namespace rulemc

#endif
