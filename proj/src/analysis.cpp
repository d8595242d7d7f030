#include "rulemc/analysis.hpp"

#include <sstream>

namespace rulemc {

namespace {

StatePredicate joint_location(const ConflictCandidate& cand) {
    return StatePredicate::conj(StatePredicate::at_loc(1, Location::rule(cand.rule_x)),
                                StatePredicate::at_loc(2, Location::rule(cand.rule_y)));
}

[[noreturn]] void rethrow_with_context(const ResourceLimitError& e, const std::string& what) {
    throw ResourceLimitError(e.cap(), what);
}

std::string store_to_text(const ValuationStore& s) {
    std::string out = "p=[";
    for (size_t i = 0; i < s.p.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(static_cast<int>(s.p[i]));
    }
    out += "] r=[";
    for (size_t i = 0; i < s.r.size(); ++i) {
        if (i) out += ',';
        out += s.r[i] ? '1' : '0';
    }
    out += ']';
    return out;
}

void append_state_fields(nlohmann::ordered_json& j, const ProductState& st,
                         const TemplateAutomaton& ta) {
    j["loc1"] = ta.name_of(st.loc1);
    j["loc2"] = ta.name_of(st.loc2);
    auto& p = j["p"] = nlohmann::ordered_json::array();
    for (TriValue v : st.store.p) p.push_back(static_cast<int>(v));
    auto& r = j["r"] = nlohmann::ordered_json::array();
    for (uint8_t used : st.store.r) r.push_back(used != 0);
}

nlohmann::ordered_json trace_to_json(const WitnessTrace& trace, const TemplateAutomaton& ta) {
    nlohmann::ordered_json steps = nlohmann::ordered_json::array();
    nlohmann::ordered_json init;
    init["process"] = 0;
    init["edge"] = "initial";
    append_state_fields(init, trace.initial, ta);
    steps.push_back(std::move(init));
    for (const Step& step : trace.steps) {
        nlohmann::ordered_json j;
        j["process"] = step.process;
        j["edge"] = ta.edges[static_cast<size_t>(step.edge)].label;
        append_state_fields(j, step.state, ta);
        steps.push_back(std::move(j));
    }
    return steps;
}

}  // namespace

std::vector<ConflictCandidate> conflict_candidates(const RuleBase& rb) {
    std::vector<ConflictCandidate> out;
    for (int prop = 0; prop < rb.prop_count; ++prop) {
        for (const Rule& rx : rb.rules) {
            bool positive = false;
            for (const Literal& lit : rx.rhs)
                if (lit.prop == prop && !lit.negated) positive = true;
            if (!positive) continue;
            for (const Rule& ry : rb.rules) {
                if (ry.id == rx.id) continue;
                for (const Literal& lit : ry.rhs)
                    if (lit.prop == prop && lit.negated)
                        out.push_back({rx.id, ry.id, prop});
            }
        }
    }
    return out;
}

ConflictFinding verify_conflict(const RuleBase& rb, const InitPolicy& policy,
                                const ConflictCandidate& cand, const ExploreOptions& opts) {
    ConflictFinding finding;
    finding.candidate = cand;
    try {
        Verdict v = check_ef(rb, policy, joint_location(cand), opts);
        finding.confirmed = v.satisfied;
        finding.witness = std::move(v.witness);
    } catch (const ResourceLimitError& e) {
        rethrow_with_context(e, "verifying conflict " + rb.rules[cand.rule_x].name + " vs " +
                                    rb.rules[cand.rule_y].name);
    }
    return finding;
}

std::pair<bool, std::vector<ReachabilityFinding>> verify_unreachability(
    const RuleBase& rb, const InitPolicy& policy, const ExploreOptions& opts) {
    bool all_used = false;
    try {
        all_used = check_ef(rb, policy, StatePredicate::all_rules_used(), opts).satisfied;
    } catch (const ResourceLimitError& e) {
        rethrow_with_context(e, "checking whether all rules can be used");
    }

    std::vector<ReachabilityFinding> findings;
    findings.reserve(rb.rules.size());
    for (const Rule& r : rb.rules) {
        try {
            Verdict v =
                check_ef(rb, policy, StatePredicate::at_loc(1, Location::rule(r.id)), opts);
            findings.push_back({r.id, v.satisfied, std::move(v.witness)});
        } catch (const ResourceLimitError& e) {
            rethrow_with_context(e, "checking reachability of rule " + r.name);
        }
    }
    return {all_used, std::move(findings)};
}

AnalysisReport analyze(const RuleBase& rb, const InitPolicy& policy, const ExploreOptions& opts) {
    AnalysisReport report;
    report.rule_count = rb.rule_count();
    report.prop_count = rb.prop_count;
    for (const Rule& r : rb.rules) report.rule_names.push_back(r.name);
    report.policy = policy;

    for (const ConflictCandidate& cand : conflict_candidates(rb))
        report.conflicts.push_back(verify_conflict(rb, policy, cand, opts));

    auto [all_used, findings] = verify_unreachability(rb, policy, opts);
    report.all_rules_used = all_used;
    report.reachability = std::move(findings);

    try {
        report.stats = reachable_stats(rb, policy, opts);
    } catch (const ResourceLimitError& e) {
        rethrow_with_context(e, "counting reachable states");
    }
    return report;
}

nlohmann::ordered_json report_to_json(const AnalysisReport& report, const RuleBase& rb) {
    const TemplateAutomaton ta = build_template(rb, report.policy);

    nlohmann::ordered_json j;
    j["rules"] = report.rule_count;
    j["props"] = report.prop_count;
    j["init"] = {{"seed_rule", report.policy.seed_rule}};

    auto& conflicts = j["conflicts"] = nlohmann::ordered_json::array();
    for (const ConflictFinding& f : report.conflicts) {
        nlohmann::ordered_json c;
        c["x"] = f.candidate.rule_x;
        c["y"] = f.candidate.rule_y;
        c["prop"] = f.candidate.prop;
        c["confirmed"] = f.confirmed;
        if (f.witness) c["witness"] = trace_to_json(*f.witness, ta);
        conflicts.push_back(std::move(c));
    }

    j["all_rules_used"] = report.all_rules_used;
    auto& reach = j["reachability"] = nlohmann::ordered_json::array();
    for (const ReachabilityFinding& f : report.reachability)
        reach.push_back({{"rule", f.rule_id}, {"reachable", f.reachable}});

    j["stats"] = {{"states", report.stats.states},
                  {"location_pairs", report.stats.location_pairs}};
    return j;
}

std::string trace_to_text(const WitnessTrace& trace, const TemplateAutomaton& ta,
                          const std::string& indent) {
    std::ostringstream out;
    out << indent << "step 0 (initial): es1=" << ta.name_of(trace.initial.loc1)
        << " es2=" << ta.name_of(trace.initial.loc2) << " | "
        << store_to_text(trace.initial.store) << '\n';
    for (size_t i = 0; i < trace.steps.size(); ++i) {
        const Step& s = trace.steps[i];
        out << indent << "step " << (i + 1) << ": es" << s.process << " takes "
            << ta.edges[static_cast<size_t>(s.edge)].label << " | es1="
            << ta.name_of(s.state.loc1) << " es2=" << ta.name_of(s.state.loc2) << " | "
            << store_to_text(s.state.store) << '\n';
    }
    return out.str();
}

std::string report_to_text(const AnalysisReport& report, const RuleBase& rb,
                           bool with_witnesses) {
    const TemplateAutomaton ta = build_template(rb, report.policy);
    std::ostringstream out;

    out << "rule base: " << report.rule_count << " rules, " << report.prop_count
        << " propositions; seed rule " << rb.rules[static_cast<size_t>(report.policy.seed_rule)].name
        << '\n';

    out << "conflicts: " << report.conflicts.size() << " candidate"
        << (report.conflicts.size() == 1 ? "" : "s") << '\n';
    for (const ConflictFinding& f : report.conflicts) {
        out << "  " << rb.rules[static_cast<size_t>(f.candidate.rule_x)].name << " vs "
            << rb.rules[static_cast<size_t>(f.candidate.rule_y)].name << " over p"
            << f.candidate.prop << ": "
            << (f.confirmed ? "CONFLICT (witness: " + std::to_string(f.witness->length()) +
                                  " steps)"
                            : "not jointly reachable")
            << '\n';
        if (with_witnesses && f.witness) out << trace_to_text(*f.witness, ta, "    ");
    }

    out << "all rules used: " << (report.all_rules_used ? "yes" : "no") << '\n';
    out << "reachability:\n";
    for (const ReachabilityFinding& f : report.reachability)
        out << "  " << rb.rules[static_cast<size_t>(f.rule_id)].name << ": "
            << (f.reachable ? "reachable" : "UNREACHABLE") << '\n';

    const uint64_t bound = static_cast<uint64_t>(3 + report.rule_count) *
                           static_cast<uint64_t>(3 + report.rule_count);
    out << "stats: " << report.stats.states << " states, " << report.stats.location_pairs
        << " location pairs (bound " << bound << ")\n";
    return out.str();
}

}  // namespace rulemc
