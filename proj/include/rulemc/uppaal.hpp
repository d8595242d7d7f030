#ifndef RULEMC_UPPAAL_HPP
#define RULEMC_UPPAAL_HPP

#include <string>
#include <string_view>

#include "rulemc/analysis.hpp"
#include "rulemc/automaton.hpp"
#include "rulemc/rulebase.hpp"

#include <json.hpp>

namespace rulemc {

/// UPPAAL interchange files: the model, the query list (one per line)
/// and a manifest tying every query line back to its finding.
struct ExportBundle {
    std::string model_xml;
    std::string queries_q;
    nlohmann::ordered_json manifest;
};

/// Render the rule base as an UPPAAL 4.x model: global p/r arrays, a
/// one-shot initp(), one template (start/rs/rf plus a location per rule)
/// and two instances es1, es2. A disjunctive seed LHS gets one
/// start -> rs edge per minimal model, otherwise the edge set is exactly
/// the template's 2+2m edges.
std::string export_model(const RuleBase& rb, const InitPolicy& policy = {});

struct QueriesExport {
    std::string queries;
    nlohmann::ordered_json manifest;
};

/// One query line per conflict candidate, one for all-rules-used, one per
/// rule. The manifest lists, per line, the finding it encodes and the
/// verdict the explorer reached.
QueriesExport export_queries(const RuleBase& rb, const AnalysisReport& report);

ExportBundle export_bundle(const RuleBase& rb, const InitPolicy& policy,
                           const AnalysisReport& report, std::string_view model_filename);

}  // namespace rulemc

#endif
