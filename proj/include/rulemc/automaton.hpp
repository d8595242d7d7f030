#ifndef RULEMC_AUTOMATON_HPP
#define RULEMC_AUTOMATON_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "rulemc/rulebase.hpp"

namespace rulemc {

/// Proposition value: false, true, or nothing (unknown). "Nothing"
/// satisfies no guard.
enum class TriValue : uint8_t { False = 0, True = 1, Nothing = 2 };

/// Shared variable state: tri-valued proposition array p plus the
/// rule-used flags r. Flags only ever go from false to true.
struct ValuationStore {
    std::vector<TriValue> p;
    std::vector<uint8_t> r;

    static ValuationStore blank(int prop_count, int rule_count);

    friend bool operator==(const ValuationStore&, const ValuationStore&) = default;
};

/// Template location. Index layout: 0 = start, 1 = rs, 2 = rf,
/// 3+i = the location for rule i.
struct Location {
    int index = 0;

    static Location start() { return {0}; }
    static Location rs() { return {1}; }
    static Location rf() { return {2}; }
    static Location rule(int rule_id) { return {3 + rule_id}; }

    bool is_rule() const { return index >= 3; }
    int rule_id() const { return index - 3; }

    friend bool operator==(const Location&, const Location&) = default;
};

/// Edge guard compiled from a rule's LHS: comparisons p[i]==0/1 combined
/// with && and ||. An empty tree (root == -1) is trivially true.
struct Guard {
    enum class Kind : uint8_t { Cmp, And, Or };

    struct Node {
        Kind kind = Kind::Cmp;
        int prop = 0;
        uint8_t required = 0;  // 0 or 1; Nothing(2) never matches
        int left = -1;
        int right = -1;
    };

    std::vector<Node> nodes;
    int root = -1;

    bool trivially_true() const { return root < 0; }
};

struct UpdateOp {
    enum class Kind : uint8_t { Assign, SetRuleUsed, InitP };

    Kind kind = Kind::Assign;
    int index = 0;      // proposition for Assign, rule for SetRuleUsed
    uint8_t value = 0;  // Assign only; never 2
};

using Update = std::vector<UpdateOp>;

struct Edge {
    Location src;
    Location dst;
    Guard guard;
    Update update;
    std::string label;  // e.g. "rs -> r0 [p[0]==1] {p[1]=1, p[4]=1}"
};

/// The compiled rule-base template. Locations: start, rs, rf and one
/// location per rule (3+m total). Edges, in declaration order:
///   start -> rs   {initp()}
///   rs -> r_i     [compiled LHS] {compiled RHS}     (per rule)
///   r_i -> rf     {r[i]=true}                       (per rule)
///   rf -> rs
/// which gives 2+2m edges.
struct TemplateAutomaton {
    int prop_count = 0;
    int rule_count = 0;
    std::vector<std::string> location_names;  // indexed by Location::index
    std::vector<Edge> edges;
    std::vector<std::vector<int>> edges_from;  // edge indices by source location
    Location initial = Location::start();

    int location_count() const { return static_cast<int>(location_names.size()); }
    const std::string& name_of(Location loc) const { return location_names[loc.index]; }
};

/// Which rule's LHS the initial store is seeded from.
struct InitPolicy {
    int seed_rule = 0;
};

Guard compile_guard(const Formula& f);
Update compile_update(const std::vector<Literal>& rhs);

TemplateAutomaton build_template(const RuleBase& rb, const InitPolicy& policy = {});

/// Initial stores: everything Nothing / unused, overlaid with one minimal
/// satisfying assignment of the seed rule's LHS. A disjunctive LHS yields
/// one store per minimal model; a contradictory LHS yields none.
std::vector<ValuationStore> initial_stores(const RuleBase& rb, const InitPolicy& policy = {});

std::string guard_to_text(const Guard& g);
std::string update_to_text(const Update& u);

}  // namespace rulemc

#endif
