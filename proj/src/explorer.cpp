#include "rulemc/explorer.hpp"

#include <algorithm>
#include <unordered_map>

namespace rulemc {

namespace {

// Exploration packs a product state into a few machine words: two location
// indices, 2 bits per proposition, 1 bit per rule flag. That caps the
// explorer at 32 propositions / 64 rules, plenty for the rule bases this
// tool targets; parsing and compilation have no such limit.
constexpr int kMaxProps = 32;
constexpr int kMaxRules = 64;

struct PackedState {
    uint32_t locs = 0;  // loc1 | loc2 << 16
    uint64_t pbits = 0;
    uint64_t rbits = 0;

    friend bool operator==(const PackedState&, const PackedState&) = default;
};

uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

struct PackedHash {
    size_t operator()(const PackedState& s) const {
        uint64_t h = mix64(s.pbits);
        h = mix64(h ^ s.rbits);
        h = mix64(h ^ s.locs);
        return static_cast<size_t>(h);
    }
};

int loc1_of(const PackedState& s) { return static_cast<int>(s.locs & 0xffff); }
int loc2_of(const PackedState& s) { return static_cast<int>(s.locs >> 16); }

uint64_t pack_store_p(const ValuationStore& s) {
    uint64_t bits = 0;
    for (size_t i = 0; i < s.p.size(); ++i)
        bits |= static_cast<uint64_t>(s.p[i]) << (2 * i);
    return bits;
}

uint64_t pack_store_r(const ValuationStore& s) {
    uint64_t bits = 0;
    for (size_t i = 0; i < s.r.size(); ++i)
        if (s.r[i]) bits |= uint64_t{1} << i;
    return bits;
}

PackedState pack(const ProductState& st) {
    PackedState p;
    p.locs = static_cast<uint32_t>(st.loc1.index) | (static_cast<uint32_t>(st.loc2.index) << 16);
    p.pbits = pack_store_p(st.store);
    p.rbits = pack_store_r(st.store);
    return p;
}

ProductState unpack(const PackedState& s, int n, int m) {
    ProductState st;
    st.loc1 = {loc1_of(s)};
    st.loc2 = {loc2_of(s)};
    st.store.p.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        st.store.p[static_cast<size_t>(i)] = static_cast<TriValue>((s.pbits >> (2 * i)) & 3);
    st.store.r.resize(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i)
        st.store.r[static_cast<size_t>(i)] = (s.rbits >> i) & 1;
    return st;
}

bool guard_holds(const Guard& g, int node, uint64_t pbits) {
    const auto& n = g.nodes[node];
    switch (n.kind) {
        case Guard::Kind::Cmp:
            return ((pbits >> (2 * n.prop)) & 3) == n.required;
        case Guard::Kind::And:
            return guard_holds(g, n.left, pbits) && guard_holds(g, n.right, pbits);
        case Guard::Kind::Or:
            return guard_holds(g, n.left, pbits) || guard_holds(g, n.right, pbits);
    }
    return false;
}

bool guard_holds(const Guard& g, uint64_t pbits) {
    return g.root < 0 || guard_holds(g, g.root, pbits);
}

void apply_packed(const Update& u, uint64_t& pbits, uint64_t& rbits) {
    for (const UpdateOp& op : u) {
        switch (op.kind) {
            case UpdateOp::Kind::Assign:
                pbits = (pbits & ~(uint64_t{3} << (2 * op.index))) |
                        (static_cast<uint64_t>(op.value) << (2 * op.index));
                break;
            case UpdateOp::Kind::SetRuleUsed:
                rbits |= uint64_t{1} << op.index;
                break;
            case UpdateOp::Kind::InitP:
                break;  // initial stores are created already seeded
        }
    }
}

bool pred_holds(const StatePredicate& p, int node, const PackedState& s, int rule_count) {
    const auto& n = p.nodes[node];
    switch (n.kind) {
        case StatePredicate::Kind::Const:
            return n.index != 0;
        case StatePredicate::Kind::AtLoc:
            return (n.process == 1 ? loc1_of(s) : loc2_of(s)) == n.loc.index;
        case StatePredicate::Kind::RuleUsed:
            return (s.rbits >> n.index) & 1;
        case StatePredicate::Kind::AllRulesUsed: {
            const uint64_t all =
                rule_count >= 64 ? ~uint64_t{0} : (uint64_t{1} << rule_count) - 1;
            return (s.rbits & all) == all;
        }
        case StatePredicate::Kind::PropIs:
            return ((s.pbits >> (2 * n.index)) & 3) == static_cast<uint64_t>(n.value);
        case StatePredicate::Kind::And:
            return pred_holds(p, n.left, s, rule_count) && pred_holds(p, n.right, s, rule_count);
        case StatePredicate::Kind::Or:
            return pred_holds(p, n.left, s, rule_count) || pred_holds(p, n.right, s, rule_count);
        case StatePredicate::Kind::Not:
            return !pred_holds(p, n.left, s, rule_count);
    }
    return false;
}

bool pred_holds(const StatePredicate& p, const PackedState& s, int rule_count) {
    return p.root < 0 || pred_holds(p, p.root, s, rule_count);
}

struct Bfs {
    std::vector<PackedState> states;  // discovery order
    std::vector<int32_t> parent;
    std::vector<uint8_t> via_process;
    std::vector<int32_t> via_edge;
    std::vector<uint8_t> pair_seen;  // (3+m)^2 bitmap
    uint64_t pairs = 0;
    int32_t goal = -1;  // first state satisfying the predicate, -1 if none
};

void ensure_explorable(const TemplateAutomaton& ta) {
    if (ta.prop_count > kMaxProps || ta.rule_count > kMaxRules)
        throw std::invalid_argument(
            "rule base too large to explore (limits: " + std::to_string(kMaxProps) +
            " propositions, " + std::to_string(kMaxRules) + " rules)");
}

// Multi-source BFS over the interleaving product. pred == nullptr means
// full exploration; otherwise stops at the first (shortest) match.
Bfs run_bfs(const TemplateAutomaton& ta, const std::vector<ValuationStore>& init,
            const StatePredicate* pred, const ExploreOptions& opts) {
    ensure_explorable(ta);

    Bfs bfs;
    const int loc_count = ta.location_count();
    bfs.pair_seen.assign(static_cast<size_t>(loc_count) * loc_count, 0);
    std::unordered_map<PackedState, int32_t, PackedHash> index_of;

    auto discover = [&](const PackedState& s, int32_t from, uint8_t proc, int32_t edge) -> bool {
        auto [it, inserted] = index_of.emplace(s, static_cast<int32_t>(bfs.states.size()));
        if (!inserted) return false;
        if (bfs.states.size() >= opts.max_states)
            throw ResourceLimitError(opts.max_states, "exploring the product state space");
        bfs.states.push_back(s);
        bfs.parent.push_back(from);
        bfs.via_process.push_back(proc);
        bfs.via_edge.push_back(edge);
        size_t pair = static_cast<size_t>(loc1_of(s)) * loc_count + loc2_of(s);
        if (!bfs.pair_seen[pair]) {
            bfs.pair_seen[pair] = 1;
            ++bfs.pairs;
        }
        if (pred && bfs.goal < 0 && pred_holds(*pred, s, ta.rule_count)) {
            bfs.goal = static_cast<int32_t>(bfs.states.size()) - 1;
            return true;
        }
        return false;
    };

    for (const ValuationStore& s : init) {
        ProductState st{Location::start(), Location::start(), s};
        if (discover(pack(st), -1, 0, -1)) return bfs;
    }

    for (size_t head = 0; head < bfs.states.size(); ++head) {
        const PackedState cur = bfs.states[head];
        for (uint8_t proc = 1; proc <= 2; ++proc) {
            const int loc = proc == 1 ? loc1_of(cur) : loc2_of(cur);
            for (int edge_idx : ta.edges_from[static_cast<size_t>(loc)]) {
                const Edge& e = ta.edges[static_cast<size_t>(edge_idx)];
                if (!guard_holds(e.guard, cur.pbits)) continue;
                PackedState next = cur;
                apply_packed(e.update, next.pbits, next.rbits);
                const uint32_t dst = static_cast<uint32_t>(e.dst.index);
                next.locs = proc == 1 ? (cur.locs & 0xffff0000u) | dst
                                      : (cur.locs & 0x0000ffffu) | (dst << 16);
                if (discover(next, static_cast<int32_t>(head), proc, edge_idx)) return bfs;
            }
        }
    }
    return bfs;
}

WitnessTrace build_trace(const Bfs& bfs, int32_t goal, const TemplateAutomaton& ta) {
    std::vector<int32_t> chain;
    for (int32_t i = goal; i >= 0; i = bfs.parent[static_cast<size_t>(i)]) chain.push_back(i);
    std::reverse(chain.begin(), chain.end());

    WitnessTrace trace;
    trace.initial = unpack(bfs.states[static_cast<size_t>(chain[0])], ta.prop_count, ta.rule_count);
    for (size_t i = 1; i < chain.size(); ++i) {
        const size_t idx = static_cast<size_t>(chain[i]);
        Step step;
        step.process = bfs.via_process[idx];
        step.edge = bfs.via_edge[idx];
        step.state = unpack(bfs.states[idx], ta.prop_count, ta.rule_count);
        trace.steps.push_back(std::move(step));
    }
    return trace;
}

Verdict ef_verdict(const TemplateAutomaton& ta, const Bfs& bfs) {
    Verdict v;
    v.states_explored = bfs.states.size();
    v.location_pairs = bfs.pairs;
    if (bfs.goal >= 0) {
        v.satisfied = true;
        v.witness = build_trace(bfs, bfs.goal, ta);
    }
    return v;
}

}  // namespace

StatePredicate StatePredicate::truth() {
    StatePredicate p;
    p.nodes.push_back({Kind::Const, 0, {}, 1, TriValue::Nothing, -1, -1});
    p.root = 0;
    return p;
}

StatePredicate StatePredicate::falsity() {
    StatePredicate p;
    p.nodes.push_back({Kind::Const, 0, {}, 0, TriValue::Nothing, -1, -1});
    p.root = 0;
    return p;
}

StatePredicate StatePredicate::at_loc(int process, Location loc) {
    StatePredicate p;
    p.nodes.push_back({Kind::AtLoc, process, loc, 0, TriValue::Nothing, -1, -1});
    p.root = 0;
    return p;
}

StatePredicate StatePredicate::rule_used(int rule_id) {
    StatePredicate p;
    p.nodes.push_back({Kind::RuleUsed, 0, {}, rule_id, TriValue::Nothing, -1, -1});
    p.root = 0;
    return p;
}

StatePredicate StatePredicate::all_rules_used() {
    StatePredicate p;
    p.nodes.push_back({Kind::AllRulesUsed, 0, {}, 0, TriValue::Nothing, -1, -1});
    p.root = 0;
    return p;
}

StatePredicate StatePredicate::prop_is(int prop, TriValue v) {
    StatePredicate p;
    p.nodes.push_back({Kind::PropIs, 0, {}, prop, v, -1, -1});
    p.root = 0;
    return p;
}

namespace {

StatePredicate combine_preds(StatePredicate::Kind op, StatePredicate a, StatePredicate b) {
    const int offset = static_cast<int>(a.nodes.size());
    for (StatePredicate::Node n : b.nodes) {
        if (n.left >= 0) n.left += offset;
        if (n.right >= 0) n.right += offset;
        a.nodes.push_back(n);
    }
    a.nodes.push_back({op, 0, {}, 0, TriValue::Nothing, a.root, b.root + offset});
    a.root = static_cast<int>(a.nodes.size()) - 1;
    return a;
}

}  // namespace

StatePredicate StatePredicate::conj(StatePredicate a, StatePredicate b) {
    if (a.root < 0) return b;
    if (b.root < 0) return a;
    return combine_preds(Kind::And, std::move(a), std::move(b));
}

StatePredicate StatePredicate::disj(StatePredicate a, StatePredicate b) {
    if (a.root < 0 || b.root < 0) return truth();
    return combine_preds(Kind::Or, std::move(a), std::move(b));
}

StatePredicate StatePredicate::neg(StatePredicate a) {
    if (a.root < 0) return falsity();
    StatePredicate p = std::move(a);
    p.nodes.push_back({Kind::Not, 0, {}, 0, TriValue::Nothing, p.root, -1});
    p.root = static_cast<int>(p.nodes.size()) - 1;
    return p;
}

namespace {

void render_pred(const StatePredicate& p, int node, const TemplateAutomaton& ta, int min_prec,
                 std::string& out) {
    const auto& n = p.nodes[node];
    switch (n.kind) {
        case StatePredicate::Kind::Const:
            out += n.index ? "true" : "false";
            return;
        case StatePredicate::Kind::AtLoc:
            out += (n.process == 1 ? "es1." : "es2.") + ta.name_of(n.loc);
            return;
        case StatePredicate::Kind::RuleUsed:
            out += "r[" + std::to_string(n.index) + "]==true";
            return;
        case StatePredicate::Kind::AllRulesUsed:
            out += "forall (i:typem) r[i]==true";
            return;
        case StatePredicate::Kind::PropIs:
            out += "p[" + std::to_string(n.index) +
                   "]==" + std::to_string(static_cast<int>(n.value));
            return;
        case StatePredicate::Kind::Not:
            out += "not ";
            render_pred(p, n.left, ta, 2, out);
            return;
        case StatePredicate::Kind::And:
        case StatePredicate::Kind::Or: {
            const int prec = n.kind == StatePredicate::Kind::And ? 1 : 0;
            const char* op = n.kind == StatePredicate::Kind::And ? " and " : " or ";
            const bool parens = prec < min_prec;
            if (parens) out += '(';
            render_pred(p, n.left, ta, prec, out);
            out += op;
            render_pred(p, n.right, ta, prec + 1, out);
            if (parens) out += ')';
            return;
        }
    }
}

}  // namespace

std::string to_text(const StatePredicate& pred, const TemplateAutomaton& ta) {
    if (pred.root < 0) return "true";
    std::string out;
    render_pred(pred, pred.root, ta, 0, out);
    return out;
}

ResourceLimitError::ResourceLimitError(uint64_t cap, const std::string& context)
    : std::runtime_error("state cap of " + std::to_string(cap) + " states exceeded while " +
                         context),
      cap_(cap) {}

bool eval_guard(const Guard& g, const ValuationStore& s) {
    return guard_holds(g, pack_store_p(s));
}

ValuationStore apply_update(const Update& u, const ValuationStore& s) {
    ValuationStore out = s;
    for (const UpdateOp& op : u) {
        switch (op.kind) {
            case UpdateOp::Kind::Assign:
                out.p[static_cast<size_t>(op.index)] =
                    op.value ? TriValue::True : TriValue::False;
                break;
            case UpdateOp::Kind::SetRuleUsed:
                out.r[static_cast<size_t>(op.index)] = 1;
                break;
            case UpdateOp::Kind::InitP:
                break;
        }
    }
    return out;
}

bool eval_predicate(const StatePredicate& pred, const ProductState& st) {
    return pred_holds(pred, pack(st), static_cast<int>(st.store.r.size()));
}

std::vector<Step> successors(const ProductState& st, const TemplateAutomaton& ta) {
    std::vector<Step> out;
    for (int proc = 1; proc <= 2; ++proc) {
        const Location loc = proc == 1 ? st.loc1 : st.loc2;
        for (int edge_idx : ta.edges_from[static_cast<size_t>(loc.index)]) {
            const Edge& e = ta.edges[static_cast<size_t>(edge_idx)];
            if (!eval_guard(e.guard, st.store)) continue;
            Step step;
            step.process = proc;
            step.edge = edge_idx;
            step.state = st;
            step.state.store = apply_update(e.update, st.store);
            (proc == 1 ? step.state.loc1 : step.state.loc2) = e.dst;
            out.push_back(std::move(step));
        }
    }
    return out;
}

Verdict check_ef(const RuleBase& rb, const InitPolicy& policy, const StatePredicate& pred,
                 const ExploreOptions& opts) {
    const TemplateAutomaton ta = build_template(rb, policy);
    const Bfs bfs = run_bfs(ta, initial_stores(rb, policy), &pred, opts);
    return ef_verdict(ta, bfs);
}

Verdict check_ag(const RuleBase& rb, const InitPolicy& policy, const StatePredicate& pred,
                 const ExploreOptions& opts) {
    Verdict ef = check_ef(rb, policy, StatePredicate::neg(pred), opts);
    Verdict v;
    v.satisfied = !ef.satisfied;
    v.witness = std::move(ef.witness);  // counterexample when not satisfied
    v.states_explored = ef.states_explored;
    v.location_pairs = ef.location_pairs;
    return v;
}

ReachStats reachable_stats(const RuleBase& rb, const InitPolicy& policy,
                           const ExploreOptions& opts) {
    const TemplateAutomaton ta = build_template(rb, policy);
    const Bfs bfs = run_bfs(ta, initial_stores(rb, policy), nullptr, opts);
    return {bfs.states.size(), bfs.pairs};
}

bool replay_witness(const TemplateAutomaton& ta, const WitnessTrace& trace,
                    const StatePredicate& pred, std::string* why) {
    auto fail = [why](const std::string& reason) {
        if (why) *why = reason;
        return false;
    };

    ProductState cur = trace.initial;
    for (size_t i = 0; i < trace.steps.size(); ++i) {
        const Step& step = trace.steps[i];
        if (step.process != 1 && step.process != 2)
            return fail("step " + std::to_string(i) + ": bad process");
        if (step.edge < 0 || step.edge >= static_cast<int>(ta.edges.size()))
            return fail("step " + std::to_string(i) + ": bad edge index");
        const Edge& e = ta.edges[static_cast<size_t>(step.edge)];
        const Location at = step.process == 1 ? cur.loc1 : cur.loc2;
        if (!(at == e.src))
            return fail("step " + std::to_string(i) + ": process not at edge source");
        if (!eval_guard(e.guard, cur.store))
            return fail("step " + std::to_string(i) + ": guard does not hold");

        ProductState next = cur;
        next.store = apply_update(e.update, cur.store);
        (step.process == 1 ? next.loc1 : next.loc2) = e.dst;
        if (!(next == step.state))
            return fail("step " + std::to_string(i) + ": recorded state mismatch");
        cur = std::move(next);
    }
    if (!eval_predicate(pred, cur)) return fail("final state does not satisfy the predicate");
    return true;
}

}  // namespace rulemc
