// rulemc: verify propositional rule bases by exhaustive exploration of a
// two-process automaton model, with UPPAAL-compatible export.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "rulemc/analysis.hpp"
#include "rulemc/explorer.hpp"
#include "rulemc/query.hpp"
#include "rulemc/rulebase.hpp"
#include "rulemc/uppaal.hpp"

namespace {

// Exit codes: 0 clean / satisfied, 1 findings / not satisfied,
// 2 usage, parse or I/O error, 3 state cap exceeded.
constexpr int kExitClean = 0;
constexpr int kExitFindings = 1;
constexpr int kExitError = 2;
constexpr int kExitResourceLimit = 3;

struct Options {
    std::string input;
    int seed_rule = 0;
    uint64_t cap = 10'000'000;
    std::string format = "text";
    std::string out_path;
    bool witness = false;
    std::string query_text;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

rulemc::RuleBase load_rule_base(const Options& opt) {
    rulemc::RuleBase rb = rulemc::parse_rule_base(read_file(opt.input));
    if (opt.seed_rule < 0 || opt.seed_rule >= rb.rule_count())
        throw std::runtime_error("seed rule " + std::to_string(opt.seed_rule) +
                                 " out of range (rule base has " +
                                 std::to_string(rb.rule_count()) + " rules)");
    return rb;
}

int cmd_check(const Options& opt) {
    const rulemc::RuleBase rb = load_rule_base(opt);
    const rulemc::InitPolicy policy{opt.seed_rule};
    const rulemc::AnalysisReport report = rulemc::analyze(rb, policy, {opt.cap});

    if (opt.format == "json") {
        std::cout << rulemc::report_to_json(report, rb).dump(2) << '\n';
    } else {
        std::cout << rulemc::report_to_text(report, rb, opt.witness);
    }

    bool findings = false;
    for (const auto& c : report.conflicts) findings |= c.confirmed;
    for (const auto& f : report.reachability) findings |= !f.reachable;
    return findings ? kExitFindings : kExitClean;
}

int cmd_query(const Options& opt) {
    const rulemc::RuleBase rb = load_rule_base(opt);
    const rulemc::InitPolicy policy{opt.seed_rule};
    const rulemc::Query query = rulemc::parse_query(opt.query_text, rb);

    rulemc::Verdict verdict = query.quant == rulemc::Query::Quant::EF
                                  ? rulemc::check_ef(rb, policy, query.pred, {opt.cap})
                                  : rulemc::check_ag(rb, policy, query.pred, {opt.cap});

    std::cout << (verdict.satisfied ? "property is satisfied" : "property is not satisfied")
              << '\n';
    if (opt.witness && verdict.witness) {
        const rulemc::TemplateAutomaton ta = rulemc::build_template(rb, policy);
        std::cout << (query.quant == rulemc::Query::Quant::EF ? "witness:\n" : "counterexample:\n");
        std::cout << rulemc::trace_to_text(*verdict.witness, ta);
    }
    return verdict.satisfied ? kExitClean : kExitFindings;
}

int cmd_export(const Options& opt) {
    const rulemc::RuleBase rb = load_rule_base(opt);
    const rulemc::InitPolicy policy{opt.seed_rule};
    const rulemc::AnalysisReport report = rulemc::analyze(rb, policy, {opt.cap});

    std::string base = opt.out_path;
    if (base.empty()) {
        base = opt.input;
        if (auto dot = base.rfind('.'); dot != std::string::npos && dot > base.rfind('/') + 1)
            base = base.substr(0, dot);
    }
    const std::string model_path = base + ".xml";
    const std::string queries_path = base + ".q";
    const std::string manifest_path = base + ".manifest.json";

    const rulemc::ExportBundle bundle =
        rulemc::export_bundle(rb, policy, report, std::filesystem::path(model_path).filename().string());

    auto write = [](const std::string& path, const std::string& content) {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write '" + path + "'");
        out << content;
        if (!out) throw std::runtime_error("error while writing '" + path + "'");
    };
    write(model_path, bundle.model_xml);
    write(queries_path, bundle.queries_q);
    write(manifest_path, bundle.manifest.dump(2) + "\n");

    std::cout << model_path << '\n' << queries_path << '\n' << manifest_path << '\n';
    return kExitClean;
}

int cmd_stats(const Options& opt) {
    const rulemc::RuleBase rb = load_rule_base(opt);
    const rulemc::ReachStats stats =
        rulemc::reachable_stats(rb, {opt.seed_rule}, {opt.cap});
    const uint64_t side = static_cast<uint64_t>(3 + rb.rule_count());
    const uint64_t bound = side * side;

    if (opt.format == "json") {
        nlohmann::ordered_json j;
        j["states"] = stats.states;
        j["location_pairs"] = stats.location_pairs;
        j["location_pair_bound"] = bound;
        std::cout << j.dump(2) << '\n';
    } else {
        std::cout << "states: " << stats.states << '\n';
        std::cout << "location pairs: " << stats.location_pairs << '\n';
        std::cout << "location pair bound (3+m)^2: " << bound << '\n';
    }
    return kExitClean;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rulemc - rule base verifier (confliction + unreachability)"};
    app.require_subcommand(1);

    Options opt;
    auto add_common = [&opt](CLI::App* cmd, bool with_format) {
        cmd->add_option("input", opt.input, "rule base file")->required();
        cmd->add_option("--seed", opt.seed_rule,
                        "rule whose LHS seeds the initial store (default 0)");
        cmd->add_option("--cap", opt.cap, "explored-state cap")->check(CLI::PositiveNumber);
        if (with_format)
            cmd->add_option("--format", opt.format, "output format")
                ->check(CLI::IsMember({"text", "json"}));
    };

    CLI::App* check = app.add_subcommand("check", "run the full conflict/reachability analysis");
    add_common(check, true);
    check->add_flag("--witness", opt.witness, "include witness traces in text output");

    CLI::App* query = app.add_subcommand("query", "evaluate an E<> or A[] query");
    add_common(query, false);
    query->add_option("query", opt.query_text, "query text, e.g. \"E<> es1.r0 and es2.r1\"")
        ->required();
    query->add_flag("--witness", opt.witness, "print the witness/counterexample trace");

    CLI::App* exp = app.add_subcommand("export", "write UPPAAL model, queries and manifest");
    add_common(exp, false);
    exp->add_option("--out", opt.out_path, "output base path (default: input minus extension)");

    CLI::App* stats = app.add_subcommand("stats", "print reachable state statistics");
    add_common(stats, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitError;
    }

    try {
        if (check->parsed()) return cmd_check(opt);
        if (query->parsed()) return cmd_query(opt);
        if (exp->parsed()) return cmd_export(opt);
        if (stats->parsed()) return cmd_stats(opt);
    } catch (const rulemc::ResourceLimitError& e) {
        std::cerr << "error: " << e.what() << " (raise --cap to continue)\n";
        return kExitResourceLimit;
    } catch (const rulemc::ParseError& e) {
        std::cerr << "error: " << opt.input << ":" << e.what() << '\n';
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
