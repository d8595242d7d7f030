#ifndef RULEMC_EXPLORER_HPP
#define RULEMC_EXPLORER_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rulemc/automaton.hpp"
#include "rulemc/rulebase.hpp"

namespace rulemc {

/// One state of the asynchronous two-process product: where each process
/// sits plus the shared store.
struct ProductState {
    Location loc1;
    Location loc2;
    ValuationStore store;

    friend bool operator==(const ProductState&, const ProductState&) = default;
};

/// Boolean state formula evaluated over product states. Flat node arena;
/// an empty tree (root == -1) is the constant true.
struct StatePredicate {
    enum class Kind : uint8_t { Const, AtLoc, RuleUsed, AllRulesUsed, PropIs, And, Or, Not };

    struct Node {
        Kind kind = Kind::Const;
        int process = 1;  // AtLoc: 1 or 2
        Location loc;     // AtLoc
        int index = 0;    // RuleUsed / PropIs; truth value for Const
        TriValue value = TriValue::Nothing;  // PropIs
        int left = -1;
        int right = -1;
    };

    std::vector<Node> nodes;
    int root = -1;  // empty arena doubles as the constant true

    static StatePredicate truth();
    static StatePredicate falsity();
    static StatePredicate at_loc(int process, Location loc);
    static StatePredicate rule_used(int rule_id);
    static StatePredicate all_rules_used();
    static StatePredicate prop_is(int prop, TriValue v);
    static StatePredicate conj(StatePredicate a, StatePredicate b);
    static StatePredicate disj(StatePredicate a, StatePredicate b);
    static StatePredicate neg(StatePredicate a);
};

std::string to_text(const StatePredicate& pred, const TemplateAutomaton& ta);

/// One interleaving step: which process moved, over which template edge,
/// and the product state reached.
struct Step {
    int process = 1;
    int edge = 0;  // index into TemplateAutomaton::edges
    ProductState state;
};

struct WitnessTrace {
    ProductState initial;
    std::vector<Step> steps;

    size_t length() const { return steps.size(); }
};

/// Outcome of a reachability query. For E<> the witness (present iff
/// satisfied) reaches a state matching the predicate; for A[] it is a
/// counterexample (present iff NOT satisfied) reaching its negation.
struct Verdict {
    bool satisfied = false;
    std::optional<WitnessTrace> witness;
    uint64_t states_explored = 0;
    uint64_t location_pairs = 0;
};

struct ExploreOptions {
    uint64_t max_states = 10'000'000;
};

class ResourceLimitError : public std::runtime_error {
public:
    ResourceLimitError(uint64_t cap, const std::string& context);

    uint64_t cap() const { return cap_; }

private:
    uint64_t cap_;
};

bool eval_guard(const Guard& g, const ValuationStore& s);

/// Apply assignments in order; untouched entries keep their value. InitP
/// is a no-op here: seeding is folded into the initial stores, the op
/// exists so the exported model can materialise initp().
ValuationStore apply_update(const Update& u, const ValuationStore& s);

bool eval_predicate(const StatePredicate& pred, const ProductState& st);

/// All one-step successors, process 1 first, edges in declaration order.
std::vector<Step> successors(const ProductState& st, const TemplateAutomaton& ta);

/// E<> pred: BFS over the two-process product from every initial store.
/// Returns a shortest witness when satisfied. Throws ResourceLimitError
/// when more than opts.max_states distinct states get explored.
Verdict check_ef(const RuleBase& rb, const InitPolicy& policy, const StatePredicate& pred,
                 const ExploreOptions& opts = {});

/// A[] pred, decided as !E<> !pred; the witness is a counterexample.
Verdict check_ag(const RuleBase& rb, const InitPolicy& policy, const StatePredicate& pred,
                 const ExploreOptions& opts = {});

struct ReachStats {
    uint64_t states = 0;
    uint64_t location_pairs = 0;
};

/// Exhaustive exploration; counts reachable states and distinct
/// (loc1, loc2) pairs, which never exceed (3+m)^2.
ReachStats reachable_stats(const RuleBase& rb, const InitPolicy& policy = {},
                           const ExploreOptions& opts = {});

/// Re-run a trace through eval_guard/apply_update and confirm every
/// intermediate state plus the final predicate. On failure, stores a
/// reason in *why when given.
bool replay_witness(const TemplateAutomaton& ta, const WitnessTrace& trace,
                    const StatePredicate& pred, std::string* why = nullptr);

}  // namespace rulemc

#endif
