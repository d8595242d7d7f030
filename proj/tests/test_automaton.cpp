#include <doctest.h>

#include <random>
#include <set>

#include "common.hpp"
#include "generators.hpp"
#include "oracle.hpp"
#include "rulemc/automaton.hpp"

using namespace rulemc;

namespace {

// Guard trees must mirror the formula trees node for node.
bool same_shape(const Formula& f, int fn, const Guard& g, int gn) {
    if (fn < 0 || gn < 0) return fn == gn;
    const auto& a = f.nodes[fn];
    const auto& b = g.nodes[gn];
    switch (a.kind) {
        case Formula::Kind::Lit:
            return b.kind == Guard::Kind::Cmp && b.prop == a.lit.prop &&
                   b.required == (a.lit.negated ? 0 : 1);
        case Formula::Kind::And:
            return b.kind == Guard::Kind::And && same_shape(f, a.left, g, b.left) &&
                   same_shape(f, a.right, g, b.right);
        case Formula::Kind::Or:
            return b.kind == Guard::Kind::Or && same_shape(f, a.left, g, b.left) &&
                   same_shape(f, a.right, g, b.right);
    }
    return false;
}

std::set<std::vector<int>> store_p_set(const std::vector<ValuationStore>& stores) {
    std::set<std::vector<int>> out;
    for (const auto& s : stores) {
        std::vector<int> p;
        for (TriValue v : s.p) p.push_back(static_cast<int>(v));
        out.insert(std::move(p));
    }
    return out;
}

}  // namespace

TEST_CASE("compile_guard maps literals to comparisons") {
    Guard pos = compile_guard(Formula::make_lit({0, false}));
    REQUIRE(pos.root >= 0);
    CHECK(pos.nodes[pos.root].kind == Guard::Kind::Cmp);
    CHECK(pos.nodes[pos.root].prop == 0);
    CHECK(pos.nodes[pos.root].required == 1);

    Guard neg = compile_guard(Formula::make_lit({2, true}));
    CHECK(neg.nodes[neg.root].prop == 2);
    CHECK(neg.nodes[neg.root].required == 0);

    Formula disj = Formula::combine(Formula::Kind::Or, Formula::make_lit({0, false}),
                                    Formula::make_lit({3, false}));
    Guard g = compile_guard(disj);
    REQUIRE(g.nodes[g.root].kind == Guard::Kind::Or);
    CHECK(guard_to_text(g) == "p[0]==1 || p[3]==1");
}

TEST_CASE("compile_guard is structure-preserving on random formulas") {
    std::mt19937 rng(11);
    for (int i = 0; i < 200; ++i) {
        Formula f = gen::random_formula(rng, 6, 3);
        Guard g = compile_guard(f);
        CHECK(same_shape(f, f.root, g, g.root));
    }
}

TEST_CASE("compile_update maps RHS literals to assignments in order") {
    Update u = compile_update({{1, false}, {4, false}});
    REQUIRE(u.size() == 2);
    CHECK(u[0].kind == UpdateOp::Kind::Assign);
    CHECK(u[0].index == 1);
    CHECK(u[0].value == 1);
    CHECK(u[1].index == 4);
    CHECK(update_to_text(u) == "p[1]=1, p[4]=1");

    Update neg = compile_update({{4, true}});
    CHECK(neg[0].value == 0);
    CHECK(update_to_text(neg) == "p[4]=0");

    CHECK(update_to_text(compile_update({{0, false}})) == "p[0]=1");
}

TEST_CASE("build_template yields the start/rs/rf + per-rule shape") {
    RuleBase rb = testdata::example_rule_base();
    TemplateAutomaton ta = build_template(rb);

    CHECK(ta.location_count() == 8);  // 3 + m
    CHECK(ta.edges.size() == 12);     // 2 + 2m

    // start -> rs carries the one-shot init
    const Edge& init = ta.edges[0];
    CHECK(init.src == Location::start());
    CHECK(init.dst == Location::rs());
    REQUIRE(init.update.size() == 1);
    CHECK(init.update[0].kind == UpdateOp::Kind::InitP);

    // rs -> r0 compiles r0's LHS and RHS
    const Edge& fire_r0 = ta.edges[1];
    CHECK(fire_r0.src == Location::rs());
    CHECK(fire_r0.dst == Location::rule(0));
    CHECK(guard_to_text(fire_r0.guard) == "p[0]==1");
    CHECK(update_to_text(fire_r0.update) == "p[1]=1, p[4]=1");

    // r0 -> rf marks the rule used
    const Edge& used_r0 = ta.edges[2];
    CHECK(used_r0.src == Location::rule(0));
    CHECK(used_r0.dst == Location::rf());
    REQUIRE(used_r0.update.size() == 1);
    CHECK(used_r0.update[0].kind == UpdateOp::Kind::SetRuleUsed);
    CHECK(used_r0.update[0].index == 0);

    // final edge loops rf back to rs with no guard and no update
    const Edge& loop = ta.edges.back();
    CHECK(loop.src == Location::rf());
    CHECK(loop.dst == Location::rs());
    CHECK(loop.guard.trivially_true());
    CHECK(loop.update.empty());

    CHECK(ta.name_of(Location::rule(2)) == "r2");
}

TEST_CASE("template size properties hold for random rule bases") {
    std::mt19937 rng(13);
    for (int i = 0; i < 50; ++i) {
        RuleBase rb = gen::random_rule_base(rng);
        TemplateAutomaton ta = build_template(rb);
        CHECK(ta.location_count() == 3 + rb.rule_count());
        CHECK(static_cast<int>(ta.edges.size()) == 2 + 2 * rb.rule_count());
    }

    TemplateAutomaton tiny = build_template(parse_rule_base("r0: p0 -> p0"));
    CHECK(tiny.location_count() == 4);
    CHECK(tiny.edges.size() == 4);
}

TEST_CASE("build_template rejects an out-of-range seed rule") {
    CHECK_THROWS_AS(build_template(testdata::example_rule_base(), {5}), std::invalid_argument);
    CHECK_THROWS_AS(initial_stores(testdata::example_rule_base(), {-1}), std::invalid_argument);
}

TEST_CASE("initial_stores seeds the example as expected") {
    RuleBase rb = testdata::example_rule_base();

    SUBCASE("seed r0: single store with p[0]=1") {
        auto stores = initial_stores(rb, {0});
        REQUIRE(stores.size() == 1);
        CHECK(store_p_set(stores) == std::set<std::vector<int>>{{1, 2, 2, 2, 2}});
        for (uint8_t flag : stores[0].r) CHECK(flag == 0);
    }
    SUBCASE("seed r3: one store per disjunct") {
        auto stores = initial_stores(rb, {3});
        CHECK(store_p_set(stores) ==
              std::set<std::vector<int>>{{1, 2, 2, 2, 2}, {2, 2, 2, 1, 2}});
    }
    SUBCASE("seed r2: negated literal forces 0") {
        auto stores = initial_stores(rb, {2});
        CHECK(store_p_set(stores) == std::set<std::vector<int>>{{2, 2, 0, 2, 2}});
    }
}

TEST_CASE("initial_stores agrees with brute-force minimal models") {
    std::mt19937 rng(17);
    for (int i = 0; i < 100; ++i) {
        RuleBase rb = gen::random_rule_base(rng, {6, 5, 2});
        const int seed = static_cast<int>(rng() % rb.rules.size());

        auto stores = initial_stores(rb, {seed});
        std::set<std::vector<int>> brute;
        for (const auto& p : oracle::initial_p_vectors(rb, seed)) brute.insert(p);
        CHECK(store_p_set(stores) == brute);

        for (const auto& s : stores)
            for (uint8_t flag : s.r) CHECK(flag == 0);
    }
}

TEST_CASE("a contradictory seed LHS has no initial store") {
    // p0 & ~p0 is fine syntactically on the LHS but can never be seeded;
    // exploration then reaches nothing
    RuleBase rb = parse_rule_base("r0: p0 & ~p0 -> p1");
    CHECK(initial_stores(rb, {0}).empty());
}

TEST_CASE("non-disjunctive satisfiable seed gives exactly one store") {
    std::mt19937 rng(19);
    int checked = 0;
    while (checked < 50) {
        RuleBase rb = gen::random_rule_base(rng, {4, 4, 2});
        const Formula& lhs = rb.rules[0].lhs;
        bool has_or = false;
        for (const auto& n : lhs.nodes) has_or |= n.kind == Formula::Kind::Or;
        if (has_or) continue;
        // a pure conjunction can still be contradictory (p0 & ~p0)
        if (oracle::minimal_models_bruteforce(lhs).empty()) continue;
        CHECK(initial_stores(rb, {0}).size() == 1);
        ++checked;
    }
}
