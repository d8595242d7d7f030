#include "rulemc/automaton.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <stdexcept>

namespace rulemc {

namespace {

// Partial assignment prop -> 0/1, kept sorted by prop.
using PartialModel = std::vector<std::pair<int, uint8_t>>;

// Merge two partial assignments; nullopt on a conflicting prop.
std::optional<PartialModel> merge(const PartialModel& a, const PartialModel& b) {
    PartialModel out;
    out.reserve(a.size() + b.size());
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].first < b[j].first) {
            out.push_back(a[i++]);
        } else if (a[i].first > b[j].first) {
            out.push_back(b[j++]);
        } else {
            if (a[i].second != b[j].second) return std::nullopt;
            out.push_back(a[i++]);
            ++j;
        }
    }
    out.insert(out.end(), a.begin() + i, a.end());
    out.insert(out.end(), b.begin() + j, b.end());
    return out;
}

bool subsumes(const PartialModel& a, const PartialModel& b) {
    // every assignment of a appears in b
    size_t j = 0;
    for (const auto& [prop, val] : a) {
        while (j < b.size() && b[j].first < prop) ++j;
        if (j >= b.size() || b[j].first != prop || b[j].second != val) return false;
    }
    return true;
}

// Models that assign only mentioned literals: a literal contributes its
// forced value, & merges, | branches.
std::vector<PartialModel> models_of(const Formula& f, int node) {
    const auto& n = f.nodes[node];
    switch (n.kind) {
        case Formula::Kind::Lit:
            return {{{n.lit.prop, n.lit.negated ? uint8_t{0} : uint8_t{1}}}};
        case Formula::Kind::Or: {
            std::vector<PartialModel> out = models_of(f, n.left);
            std::vector<PartialModel> right = models_of(f, n.right);
            out.insert(out.end(), right.begin(), right.end());
            return out;
        }
        case Formula::Kind::And: {
            std::vector<PartialModel> out;
            for (const PartialModel& a : models_of(f, n.left))
                for (const PartialModel& b : models_of(f, n.right))
                    if (auto m = merge(a, b)) out.push_back(std::move(*m));
            return out;
        }
    }
    return {};
}

std::vector<PartialModel> minimal_models(const Formula& f) {
    if (f.root < 0) return {};
    std::vector<PartialModel> all = models_of(f, f.root);

    // drop exact duplicates, keep first occurrence
    std::vector<PartialModel> unique;
    std::set<PartialModel> seen;
    for (PartialModel& m : all)
        if (seen.insert(m).second) unique.push_back(std::move(m));

    // drop non-minimal assignments (a strictly smaller one also satisfies)
    std::vector<PartialModel> out;
    for (size_t i = 0; i < unique.size(); ++i) {
        bool minimal = true;
        for (size_t j = 0; j < unique.size() && minimal; ++j)
            if (j != i && unique[j] != unique[i] && subsumes(unique[j], unique[i]))
                minimal = false;
        if (minimal) out.push_back(unique[i]);
    }
    return out;
}

void render_guard(const Guard& g, int node, int min_prec, std::string& out) {
    const auto& n = g.nodes[node];
    if (n.kind == Guard::Kind::Cmp) {
        out += "p[" + std::to_string(n.prop) + "]==" + std::to_string(n.required);
        return;
    }
    const int prec = n.kind == Guard::Kind::And ? 1 : 0;
    const char* op = n.kind == Guard::Kind::And ? " && " : " || ";
    const bool parens = prec < min_prec;
    if (parens) out += '(';
    render_guard(g, n.left, prec, out);
    out += op;
    render_guard(g, n.right, prec + 1, out);
    if (parens) out += ')';
}

}  // namespace

ValuationStore ValuationStore::blank(int prop_count, int rule_count) {
    ValuationStore s;
    s.p.assign(static_cast<size_t>(prop_count), TriValue::Nothing);
    s.r.assign(static_cast<size_t>(rule_count), 0);
    return s;
}

Guard compile_guard(const Formula& f) {
    Guard g;
    g.nodes.reserve(f.nodes.size());
    for (const auto& n : f.nodes) {
        switch (n.kind) {
            case Formula::Kind::Lit:
                g.nodes.push_back({Guard::Kind::Cmp, n.lit.prop,
                                   n.lit.negated ? uint8_t{0} : uint8_t{1}, -1, -1});
                break;
            case Formula::Kind::And:
                g.nodes.push_back({Guard::Kind::And, 0, 0, n.left, n.right});
                break;
            case Formula::Kind::Or:
                g.nodes.push_back({Guard::Kind::Or, 0, 0, n.left, n.right});
                break;
        }
    }
    g.root = f.root;
    return g;
}

Update compile_update(const std::vector<Literal>& rhs) {
    Update u;
    u.reserve(rhs.size());
    for (const Literal& lit : rhs)
        u.push_back({UpdateOp::Kind::Assign, lit.prop, lit.negated ? uint8_t{0} : uint8_t{1}});
    return u;
}

std::string guard_to_text(const Guard& g) {
    std::string out;
    if (g.root >= 0) render_guard(g, g.root, 0, out);
    return out;
}

std::string update_to_text(const Update& u) {
    std::string out;
    for (size_t i = 0; i < u.size(); ++i) {
        if (i) out += ", ";
        const UpdateOp& op = u[i];
        switch (op.kind) {
            case UpdateOp::Kind::Assign:
                out += "p[" + std::to_string(op.index) + "]=" + std::to_string(op.value);
                break;
            case UpdateOp::Kind::SetRuleUsed:
                out += "r[" + std::to_string(op.index) + "]=true";
                break;
            case UpdateOp::Kind::InitP:
                out += "initp()";
                break;
        }
    }
    return out;
}

TemplateAutomaton build_template(const RuleBase& rb, const InitPolicy& policy) {
    if (policy.seed_rule < 0 || policy.seed_rule >= rb.rule_count())
        throw std::invalid_argument("seed rule " + std::to_string(policy.seed_rule) +
                                    " out of range (rule base has " +
                                    std::to_string(rb.rule_count()) + " rules)");

    TemplateAutomaton ta;
    ta.prop_count = rb.prop_count;
    ta.rule_count = rb.rule_count();
    ta.location_names = {"start", "rs", "rf"};
    for (const Rule& r : rb.rules) ta.location_names.push_back(r.name);

    auto add_edge = [&ta](Location src, Location dst, Guard guard, Update update) {
        Edge e{src, dst, std::move(guard), std::move(update), ""};
        e.label = ta.name_of(src) + " -> " + ta.name_of(dst);
        if (!e.guard.trivially_true()) e.label += " [" + guard_to_text(e.guard) + "]";
        if (!e.update.empty()) e.label += " {" + update_to_text(e.update) + "}";
        ta.edges.push_back(std::move(e));
    };

    add_edge(Location::start(), Location::rs(), {}, {{UpdateOp::Kind::InitP, 0, 0}});
    for (const Rule& r : rb.rules) {
        add_edge(Location::rs(), Location::rule(r.id), compile_guard(r.lhs),
                 compile_update(r.rhs));
        add_edge(Location::rule(r.id), Location::rf(), {},
                 {{UpdateOp::Kind::SetRuleUsed, r.id, 0}});
    }
    add_edge(Location::rf(), Location::rs(), {}, {});

    ta.edges_from.resize(ta.location_names.size());
    for (size_t i = 0; i < ta.edges.size(); ++i)
        ta.edges_from[ta.edges[i].src.index].push_back(static_cast<int>(i));
    return ta;
}

std::vector<ValuationStore> initial_stores(const RuleBase& rb, const InitPolicy& policy) {
    if (policy.seed_rule < 0 || policy.seed_rule >= rb.rule_count())
        throw std::invalid_argument("seed rule " + std::to_string(policy.seed_rule) +
                                    " out of range (rule base has " +
                                    std::to_string(rb.rule_count()) + " rules)");

    std::vector<ValuationStore> out;
    for (const PartialModel& model : minimal_models(rb.rules[policy.seed_rule].lhs)) {
        ValuationStore s = ValuationStore::blank(rb.prop_count, rb.rule_count());
        for (const auto& [prop, val] : model)
            s.p[static_cast<size_t>(prop)] = val ? TriValue::True : TriValue::False;
        if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(std::move(s));
    }
    return out;
}

}  // namespace rulemc
