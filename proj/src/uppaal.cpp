#include "rulemc/uppaal.hpp"

#include <sstream>

namespace rulemc {

namespace {

std::string xml_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '\'': out += "&apos;"; break;
            case '"': out += "&quot;"; break;
            default: out += c; break;
        }
    }
    return out;
}

std::string init_function_body(const ValuationStore& store, int prop_count) {
    std::string body;
    body += "    int i;\n";
    body += "    if (initialized) { return; }\n";
    body += "    for (i = 0; i < n; i++) { p[i] = 2; }\n";
    for (int i = 0; i < prop_count; ++i)
        if (store.p[static_cast<size_t>(i)] != TriValue::Nothing)
            body += "    p[" + std::to_string(i) +
                    "] = " + std::to_string(static_cast<int>(store.p[static_cast<size_t>(i)])) +
                    ";\n";
    body += "    initialized = true;\n";
    return body;
}

struct Layout {
    int x = 0, y = 0;
};

Layout location_layout(Location loc, int rule_count) {
    switch (loc.index) {
        case 0: return {-280, 0};  // start
        case 1: return {0, 0};     // rs
        case 2: return {520, 0};   // rf
        default: break;
    }
    // rule locations fan out vertically between rs and rf
    const int i = loc.rule_id();
    return {260, 120 * i - 60 * (rule_count - 1)};
}

}  // namespace

std::string export_model(const RuleBase& rb, const InitPolicy& policy) {
    const int n = rb.prop_count;
    const int m = rb.rule_count();
    const TemplateAutomaton ta = build_template(rb, policy);
    const std::vector<ValuationStore> stores = initial_stores(rb, policy);

    // Global declarations. The seed assignment lives in initp(); a
    // disjunctive seed LHS yields one function (and one start->rs edge)
    // per minimal model, the guard inside keeps initialisation one-shot.
    std::string decl;
    decl += "// shared rule-base state\n";
    decl += "const int n = " + std::to_string(n) + ";\n";
    decl += "const int m = " + std::to_string(m) + ";\n";
    decl += "typedef int[0,m-1] typem;\n";
    decl += "int p[n];\n";
    decl += "bool r[m];\n";
    decl += "bool initialized = false;\n";
    std::vector<std::string> init_names;
    if (stores.size() <= 1) {
        init_names.push_back("initp");
    } else {
        for (size_t k = 0; k < stores.size(); ++k)
            init_names.push_back("initp" + std::to_string(k));
    }
    for (size_t k = 0; k < stores.size(); ++k) {
        decl += "void " + init_names[k] + "() {\n";
        decl += init_function_body(stores[k], n);
        decl += "}\n";
    }
    if (stores.empty()) {
        // unsatisfiable seed LHS: nothing can be seeded, keep a stub so the
        // model still loads
        decl += "void initp() {\n    initialized = true;\n}\n";
        init_names.push_back("initp");
    }

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"utf-8\"?>\n";
    out << "<!DOCTYPE nta PUBLIC '-//Uppaal Team//DTD Flat System 1.1//EN' "
           "'http://www.it.uu.se/research/group/darts/uppaal/flat-1_1.dtd'>\n";
    out << "<nta>\n";
    out << "  <declaration>" << xml_escape(decl) << "</declaration>\n";
    out << "  <template>\n";
    out << "    <name>ES</name>\n";

    for (int idx = 0; idx < ta.location_count(); ++idx) {
        const Layout at = location_layout({idx}, m);
        out << "    <location id=\"id" << idx << "\" x=\"" << at.x << "\" y=\"" << at.y << "\">\n";
        out << "      <name x=\"" << at.x - 10 << "\" y=\"" << at.y - 34 << "\">"
            << xml_escape(ta.location_names[static_cast<size_t>(idx)]) << "</name>\n";
        out << "    </location>\n";
    }
    out << "    <init ref=\"id0\"/>\n";

    auto emit_transition = [&](const Edge& e, const std::string& assignment_text) {
        const Layout a = location_layout(e.src, m);
        const Layout b = location_layout(e.dst, m);
        const int mx = (a.x + b.x) / 2;
        const int my = (a.y + b.y) / 2;
        out << "    <transition>\n";
        out << "      <source ref=\"id" << e.src.index << "\"/>\n";
        out << "      <target ref=\"id" << e.dst.index << "\"/>\n";
        if (!e.guard.trivially_true())
            out << "      <label kind=\"guard\" x=\"" << mx << "\" y=\"" << my - 30 << "\">"
                << xml_escape(guard_to_text(e.guard)) << "</label>\n";
        if (!assignment_text.empty())
            out << "      <label kind=\"assignment\" x=\"" << mx << "\" y=\"" << my - 12 << "\">"
                << xml_escape(assignment_text) << "</label>\n";
        out << "    </transition>\n";
    };

    for (const Edge& e : ta.edges) {
        const bool is_init_edge =
            !e.update.empty() && e.update.front().kind == UpdateOp::Kind::InitP;
        if (is_init_edge) {
            for (const std::string& fn : init_names) emit_transition(e, fn + "()");
        } else {
            emit_transition(e, update_to_text(e.update));
        }
    }

    out << "  </template>\n";
    out << "  <system>es1 = ES();\nes2 = ES();\nsystem es1, es2;\n</system>\n";
    out << "</nta>\n";
    return out.str();
}

QueriesExport export_queries(const RuleBase& rb, const AnalysisReport& report) {
    QueriesExport result;
    nlohmann::ordered_json entries = nlohmann::ordered_json::array();
    int line = 0;

    auto add = [&](const std::string& query) -> nlohmann::ordered_json& {
        result.queries += query;
        result.queries += '\n';
        ++line;
        entries.push_back({{"line", line}, {"query", query}});
        return entries.back();
    };

    for (const ConflictFinding& f : report.conflicts) {
        const std::string& x = rb.rules[static_cast<size_t>(f.candidate.rule_x)].name;
        const std::string& y = rb.rules[static_cast<size_t>(f.candidate.rule_y)].name;
        auto& entry = add("E<> es1." + x + " and es2." + y);
        entry["kind"] = "conflict";
        entry["x"] = f.candidate.rule_x;
        entry["y"] = f.candidate.rule_y;
        entry["prop"] = f.candidate.prop;
        entry["satisfied"] = f.confirmed;
    }

    {
        auto& entry = add("E<> forall (i:typem) r[i]==true");
        entry["kind"] = "all_rules_used";
        entry["satisfied"] = report.all_rules_used;
    }

    for (const ReachabilityFinding& f : report.reachability) {
        auto& entry = add("E<> es1." + rb.rules[static_cast<size_t>(f.rule_id)].name);
        entry["kind"] = "reachability";
        entry["rule"] = f.rule_id;
        entry["satisfied"] = f.reachable;
    }

    result.manifest["queries"] = std::move(entries);
    return result;
}

ExportBundle export_bundle(const RuleBase& rb, const InitPolicy& policy,
                           const AnalysisReport& report, std::string_view model_filename) {
    ExportBundle bundle;
    bundle.model_xml = export_model(rb, policy);
    QueriesExport q = export_queries(rb, report);
    bundle.queries_q = std::move(q.queries);
    bundle.manifest = nlohmann::ordered_json();
    bundle.manifest["model"] = std::string(model_filename);
    bundle.manifest["queries"] = std::move(q.manifest["queries"]);
    return bundle;
}

}  // namespace rulemc
