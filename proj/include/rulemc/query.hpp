#ifndef RULEMC_QUERY_HPP
#define RULEMC_QUERY_HPP

#include <string>
#include <string_view>

#include "rulemc/explorer.hpp"
#include "rulemc/rulebase.hpp"

namespace rulemc {

/// A parsed verifier query: a path quantifier plus a state formula.
struct Query {
    enum class Quant { EF, AG };  // E<> / A[]

    Quant quant = Quant::EF;
    StatePredicate pred;
    std::string text;
};

/// Parse the query mini-language:
///
///   query := ("E<>" | "A[]") expr
///   expr  := term ("or" term)* ; term := factor ("and" factor)*
///   factor:= "not" factor | "(" expr ")" | "true" | "false" | atom
///   atom  := ("es1"|"es2") "." location
///          | "r[" INT "]" "==" ("true"|"false")
///          | "forall" "(" ID ":" "typem" ")" "r[" ID "]" "==" "true"
///
/// Locations are start, rs, rf or a rule name. Throws ParseError with a
/// 1-based column on malformed input.
Query parse_query(std::string_view text, const RuleBase& rb);

}  // namespace rulemc

#endif
