#ifndef RULEMC_ANALYSIS_HPP
#define RULEMC_ANALYSIS_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rulemc/explorer.hpp"
#include "rulemc/rulebase.hpp"

#include <json.hpp>

namespace rulemc {

/// Syntactic conflict candidate: rule_x asserts p<prop>, rule_y asserts
/// ~p<prop> on their RHS.
struct ConflictCandidate {
    int rule_x = 0;
    int rule_y = 0;
    int prop = 0;

    friend bool operator==(const ConflictCandidate&, const ConflictCandidate&) = default;
};

struct ConflictFinding {
    ConflictCandidate candidate;
    bool confirmed = false;
    std::optional<WitnessTrace> witness;  // present iff confirmed
};

struct ReachabilityFinding {
    int rule_id = 0;
    bool reachable = false;
    std::optional<WitnessTrace> witness;  // present iff reachable
};

struct AnalysisReport {
    int rule_count = 0;
    int prop_count = 0;
    std::vector<std::string> rule_names;
    InitPolicy policy;
    std::vector<ConflictFinding> conflicts;
    bool all_rules_used = false;
    std::vector<ReachabilityFinding> reachability;  // one per rule, in id order
    ReachStats stats;
};

/// All complementary RHS pairs, ordered by (prop, rule_x, rule_y).
std::vector<ConflictCandidate> conflict_candidates(const RuleBase& rb);

/// A candidate is a real conflict when both rule locations are jointly
/// reachable: E<> es1.r<x> and es2.r<y>.
ConflictFinding verify_conflict(const RuleBase& rb, const InitPolicy& policy,
                                const ConflictCandidate& cand, const ExploreOptions& opts = {});

/// E<> forall r[i]==true, plus a per-rule E<> es1.r<i> diagnosis.
std::pair<bool, std::vector<ReachabilityFinding>> verify_unreachability(
    const RuleBase& rb, const InitPolicy& policy, const ExploreOptions& opts = {});

AnalysisReport analyze(const RuleBase& rb, const InitPolicy& policy = {},
                       const ExploreOptions& opts = {});

nlohmann::ordered_json report_to_json(const AnalysisReport& report, const RuleBase& rb);
std::string report_to_text(const AnalysisReport& report, const RuleBase& rb,
                           bool with_witnesses = false);

/// Human-readable trace rendering shared by reports and the CLI.
std::string trace_to_text(const WitnessTrace& trace, const TemplateAutomaton& ta,
                          const std::string& indent = "  ");

}  // namespace rulemc

#endif
