#ifndef RULEMC_TESTS_COMMON_HPP
#define RULEMC_TESTS_COMMON_HPP

#include <string>

#include "rulemc/rulebase.hpp"

namespace testdata {

// The worked five-rule example used throughout the docs and tests.
inline const char* kExampleRules =
    "r0: p0 -> p1 & p4\n"
    "r1: p1 -> ~p4\n"
    "r2: ~p2 -> p0 & p1\n"
    "r3: p0 | p3 -> p4\n"
    "r4: p4 -> p3\n";

inline rulemc::RuleBase example_rule_base() { return rulemc::parse_rule_base(kExampleRules); }

}  // namespace testdata

#endif
