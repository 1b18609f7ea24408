#include <doctest.h>

#include <map>

#include "bhca/errors.hpp"
#include "bhca/lp_format.hpp"
#include "bhca/model.hpp"
#include "bhca/plan.hpp"
#include "bhca/run.hpp"
#include "support.hpp"

using namespace bhca;

namespace {

std::map<std::string, int> rows_per_tag(const LinearProgram& lp) {
    std::map<std::string, int> out;
    for (const auto& r : lp.rows) ++out[r.tag];
    return out;
}

// Cluster 0 lit in every slot with carrier c held by user c; cluster 1 dark.
std::vector<double> one_cluster_lit(const ModelInstance& m, const test::Instance& in) {
    const auto& cat = m.catalog;
    std::vector<double> x(cat.size(), 0.0);
    for (int c = 0; c < cat.num_carriers(0); ++c) {
        x[cat.a(0, c, c)] = 1;
        x[cat.beta(0, c, c)] = 1;
    }
    for (int t = 0; t < cat.num_slots(); ++t) x[cat.z(0, t)] = 1;
    test::complete(m, in, x);
    return x;
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("row counts of the tiny instance") {
    const test::Instance in = test::tiny(1);
    REQUIRE(in.pairs.size() == 1);
    const ModelInstance m = in.model();
    auto n = rows_per_tag(m.program);
    CHECK(n["C1"] == 4);
    CHECK(n["C2"] == 4);
    CHECK(n["C3"] == 2);
    CHECK(n["C4"] == 4);
    CHECK(n["C5"] == 2);
    CHECK(n["C6"] == 2 * int(in.pairs.size()));
    CHECK(n["C7-a"] == 8);
    CHECK(n["C7-b"] == 8);
    CHECK(n["C8-a"] + n["C8-b"] == 3);
    CHECK(n["C8-b"] == 1);
    CHECK(n["C9-a"] + n["C9-b"] + n["C9-c"] + n["C9-d"] == 64);
    CHECK(m.program.binary_columns().size() == 12);
    CHECK(m.program.num_columns() == 8 + 8 + 4 + 16 + 2 + 1 + 1);
}

TEST_CASE("row counts of the reference instance") {
    const test::Instance in = test::generated(reference_config(), 1);
    const ModelInstance m = in.model();
    auto n = rows_per_tag(m.program);
    CHECK(n["C1"] == 192);
    CHECK(n["C2"] == 16);
    CHECK(n["C3"] == 64);
    CHECK(n["C6"] == 13 * 64);
    CHECK(n["C7-a"] == 8 * 2 * 24);
    CHECK(n["C8-b"] == 1);
    CHECK(n["C9-d"] == 8 * 2 * 24 * 64);
}

TEST_CASE("columns, bounds and objective") {
    const test::Instance in = test::tiny(2);
    const ModelInstance m = in.model();
    const auto& cat = m.catalog;
    int tl = 0;
    for (const auto& col : m.program.columns) {
        if (col.name == "tL") ++tl;
        if (col.binary) {
            CHECK(col.lower == 0);
            CHECK(col.upper == 1);
        }
    }
    CHECK(tl == 1);
    CHECK(cat.name(cat.a(0, 0, 0)) == "a_1_1_1");
    CHECK(cat.name(cat.beta(1, 1, 0)) == "beta_2_2_1");
    CHECK(cat.name(cat.z(1, 1)) == "z_2_2");
    CHECK(cat.name(cat.q(0, 1, 1, 0)) == "q_1_2_2_1");
    CHECK(cat.name(cat.t_upper(1)) == "tU_2");
    CHECK(cat.name(cat.theta()) == "theta");
    CHECK(cat.a(0, 0, 0) < cat.beta(0, 0, 0));
    CHECK(cat.beta(1, 1, 1) < cat.z(0, 0));
    CHECK(cat.z(1, 1) < cat.q(0, 0, 0, 0));

    const std::vector<Term> objective{{cat.t_upper(0), 1e-4}, {cat.t_upper(1), 1e-4}, {cat.t_lower(), 1e-4},
                                      {cat.theta(), 1.0}};
    CHECK(m.program.objective == objective);
}

TEST_CASE("supply rows are normalized by demand") {
    const test::Instance in = test::tiny(4);
    const ModelInstance m = in.model();
    const auto& cat = m.catalog;
    for (const auto& row : m.program.rows) {
        if (row.name != "C4_1_2") continue;
        const double d = in.scenario.users[in.scenario.clusters[0].user_ids[1]].demand;
        for (const auto& term : row.terms) {
            if (term.column == cat.t_upper(0)) {
                CHECK(term.coef == -1.0);
            } else {
                CHECK(term.coef == in.rates.cluster(0).per_slot((term.column - cat.q(0, 0, 0, 0)) / 2 / 2, 1) / d);
            }
        }
    }
}

TEST_CASE("build is deterministic and the tiny snapshot hash is stable") {
    const test::Instance in = test::snapshot("tiny_seed3.json");
    const std::string a = export_lp(in.model());
    const std::string b = export_lp(in.model());
    CHECK(a == b);
    std::string golden = test::slurp(test::fixture("tiny_seed3.lp.sha256"));
    golden.erase(golden.find_last_not_of("\n") + 1);
    CHECK(sha256_hex(a) == golden);
}

TEST_CASE("validation") {
    const test::Instance in = test::tiny(3);
    const ModelInstance m = in.model();
    const auto& cat = m.catalog;

    std::vector<double> zero(cat.size(), 0.0);
    CHECK(validate_solution(m, zero).feasible());

    std::vector<double> x = zero;
    x[cat.beta(0, 0, 0)] = 0.5;  // beta without its activation binary
    const auto report = validate_solution(m, x);
    REQUIRE(!report.feasible());
    bool c7 = false;
    for (const auto& v : report.violations) c7 |= v.name == "C7a_1_1_1";
    CHECK(c7);

    x = zero;
    x[cat.z(0, 0)] = 0.5;
    const auto frac = validate_solution(m, x);
    REQUIRE(frac.violations.size() == 1);
    CHECK(frac.violations[0].kind == Violation::Kind::integrality);

    x = zero;
    x[cat.z(0, 0)] = 1;
    x[cat.z(1, 0)] = 1;  // adjacent clusters in one slot, also over the slot cap
    CHECK(validate_solution(m, x).violations.size() == 2);

    CHECK_THROWS_AS(validate_solution(m, std::vector<double>(3, 0.0)), StructuralError);
}

TEST_CASE("assignments built from raw beta and z are feasible") {
    const test::Instance in = test::tiny(6);
    const ModelInstance m = in.model();
    const auto x = one_cluster_lit(m, in);
    CHECK(validate_solution(m, x).feasible());
    CHECK(x[m.catalog.theta()] == 0);  // cluster 1 gets nothing
}

TEST_CASE("decoding an all-dark schedule gives zero supply") {
    const test::Instance in = test::tiny(1);
    const ModelInstance m = in.model();
    const AllocationPlan plan = decode_plan(m, std::vector<double>(m.catalog.size(), 0.0), in.scenario, in.rates);
    for (double s : plan.user_supply) CHECK(s == 0);
    for (double s : plan.cluster_supply) CHECK(s == 0);
    CHECK(plan.total_supply == 0);
    for (const auto& sched : plan.schedule) CHECK(sched.empty());
}

TEST_CASE("a single user on a full carrier in every slot gets N_TS times the slot rate") {
    const test::Instance in = test::manual(2, 1, 1, 4, 1, 1e8, 1e5);
    const ModelInstance m = build_model(in.scenario, in.rates, {});
    const auto x = one_cluster_lit(m, in);
    const AllocationPlan plan = decode_plan(m, x, in.scenario, in.rates);
    CHECK(plan.user_supply[0] == doctest::Approx(4 * 1e8 * in.scenario.config.slot_duration).epsilon(1e-15));
    CHECK(plan.user_supply[1] == 0);
    CHECK(plan.schedule[0] == std::vector<int>{0, 1, 2, 3});
    CHECK(plan.active_in_slot(2) == 1);
    REQUIRE(plan.carriers[0].size() == 1);
    CHECK(plan.carriers[0][0].carrier_id == 0);
    CHECK(plan.carriers[0][0].fill == 1.0);
}

TEST_CASE("decoded supplies match the raw recomputation and add up exactly") {
    const test::Instance in = test::snapshot("tiny_seed3.json");
    const ModelInstance m = in.model();
    const auto& cat = m.catalog;
    std::vector<double> x(cat.size(), 0.0);
    x[cat.z(0, 0)] = 1;
    x[cat.z(1, 1)] = 1;
    for (int l = 0; l < 2; ++l) {
        x[cat.a(l, 0, 0)] = x[cat.a(l, 0, 1)] = x[cat.a(l, 1, 1)] = 1;
        x[cat.beta(l, 0, 0)] = 0.625;
        x[cat.beta(l, 0, 1)] = 0.375;
        x[cat.beta(l, 1, 1)] = 1.0;
    }
    test::complete(m, in, x);
    REQUIRE(validate_solution(m, x).feasible());
    const AllocationPlan plan = decode_plan(m, x, in.scenario, in.rates);
    const auto expected = test::supply_from_raw(m, in, x);
    double total = 0;
    for (int l = 0; l < 2; ++l) {
        double cluster = 0;
        for (int u : in.scenario.clusters[l].user_ids) {
            CHECK(plan.user_supply[u] == doctest::Approx(expected[u]).epsilon(1e-12));
            cluster += plan.user_supply[u];
        }
        CHECK(plan.cluster_supply[l] == cluster);
        total += plan.cluster_supply[l];
    }
    CHECK(plan.total_supply == total);
    CHECK(audit_schedule(plan, 1, in.pairs).empty());
}

TEST_CASE("decoding refuses infeasible or mismatched input") {
    const test::Instance in = test::tiny(1);
    const ModelInstance m = in.model();
    std::vector<double> x(m.catalog.size(), 0.0);
    x[m.catalog.z(0, 0)] = 1;
    x[m.catalog.z(1, 0)] = 1;
    try {
        decode_plan(m, x, in.scenario, in.rates);
        FAIL("expected InfeasiblePlanError");
    } catch (const InfeasiblePlanError& e) {
        CHECK(!e.report().feasible());
    }

    RateTable short_rates = in.rates;
    short_rates.clusters.pop_back();
    CHECK_THROWS_AS(decode_plan(m, std::vector<double>(m.catalog.size(), 0.0), in.scenario, short_rates),
                    StructuralError);
}

}
