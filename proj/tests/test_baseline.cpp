#include <doctest.h>

#include <bit>
#include <map>
#include <random>
#include <numeric>
#include <set>

#include "bhca/baseline.hpp"
#include "bhca/errors.hpp"
#include "support.hpp"

using namespace bhca;

namespace {

std::vector<double> capacities(const test::Instance& in) {
    std::vector<double> cap;
    for (int l = 0; l < in.scenario.num_clusters(); ++l) cap.push_back(cluster_slot_capacity(in.scenario, in.rates, l));
    return cap;
}

/**
 * Best stage-one objective by dynamic programming over slots: the state is
 * the vector of lit-slot counts per cluster, each slot adds one admissible
 * set of clusters.
 */
double schedule_oracle(const test::Instance& in, const std::vector<double>& cap, double eps) {
    const auto& s = in.scenario;
    const int L = s.num_clusters();
    std::vector<unsigned> admissible;
    for (unsigned mask = 0; mask < (1u << L); ++mask) {
        if (std::popcount(mask) > s.config.active_clusters_per_slot) continue;
        bool ok = true;
        for (const auto& [a, b] : in.pairs) ok &= !((mask >> a & 1u) && (mask >> b & 1u));
        if (ok) admissible.push_back(mask);
    }
    std::set<std::vector<int>> states{std::vector<int>(L, 0)};
    for (int t = 0; t < s.num_slots(); ++t) {
        std::set<std::vector<int>> next;
        for (const auto& n : states)
            for (unsigned mask : admissible) {
                auto m = n;
                for (int l = 0; l < L; ++l) m[l] += (mask >> l) & 1u;
                next.insert(std::move(m));
            }
        states = std::move(next);
    }
    double best = -kInf;
    for (const auto& n : states) {
        double theta = kInf, sum = 0;
        for (int l = 0; l < L; ++l) {
            const double r = n[l] * cap[l] / s.cluster_demand(l);
            theta = std::min(theta, r);
            sum += r;
        }
        best = std::max(best, theta + eps * sum);
    }
    return best;
}

bool schedule_admissible(const test::Instance& in, const std::vector<std::vector<int>>& schedule) {
    for (int t = 0; t < in.scenario.num_slots(); ++t) {
        std::set<int> lit;
        for (int l = 0; l < in.scenario.num_clusters(); ++l)
            if (std::count(schedule[l].begin(), schedule[l].end(), t)) lit.insert(l);
        if (static_cast<int>(lit.size()) > in.scenario.config.active_clusters_per_slot) return false;
        for (const auto& [a, b] : in.pairs)
            if (lit.count(a) && lit.count(b)) return false;
    }
    return true;
}

}  // namespace

TEST_SUITE("baseline") {

TEST_CASE("slot distribution") {
    CHECK(distribute_slots(8, std::vector<double>{1, 1, 1, 1}) == std::vector<int>{2, 2, 2, 2});
    CHECK(distribute_slots(2, std::vector<double>{1, 3, 2}) == std::vector<int>{0, 1, 1});
    CHECK(distribute_slots(5, std::vector<double>{1, 1}) == std::vector<int>{3, 2});
    CHECK(distribute_slots(2, std::vector<double>{2, 2, 2}) == std::vector<int>{1, 1, 0});
    CHECK(distribute_slots(0, std::vector<double>{1, 2}) == std::vector<int>{0, 0});
    CHECK(distribute_slots(7, std::vector<double>{3, 1}) == std::vector<int>{5, 2});  // quotas 5.25, 1.75
}

TEST_CASE("slot distribution conserves slots") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> d(0.1, 5.0);
    std::uniform_int_distribution<int> n(1, 12), slots(0, 40);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<double> demands(n(rng));
        for (auto& v : demands) v = d(rng);
        const int k = slots(rng);
        const auto out = distribute_slots(k, demands);
        CHECK(std::accumulate(out.begin(), out.end(), 0) == k);
        for (int v : out) CHECK(v >= 0);
        if (k <= static_cast<int>(demands.size())) {
            for (int v : out) CHECK(v <= 1);
        }
    }
}

TEST_CASE("stage one matches the count-vector oracle") {
    SystemConfig small = reference_config();
    small.slots_per_window = 3;
    std::vector<test::Instance> cases{test::generated(desk_config(), 1), test::generated(desk_config(), 4),
                                      test::generated(small, 2)};
    for (const auto& in : cases) {
        const auto cap = capacities(in);
        const BhPlan plan = solve_bh(in.scenario, in.rates, in.pairs);
        REQUIRE(plan.stage1.status == MilpStatus::optimal);
        CHECK(plan.stage1.objective == doctest::Approx(schedule_oracle(in, cap, 1e-4)).epsilon(1e-9));
        CHECK(schedule_admissible(in, plan.schedule));
    }
}

TEST_CASE("greedy schedule is admissible") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const test::Instance in = test::generated(reference_config(), seed);
        const auto schedule = greedy_schedule(in.scenario, capacities(in), in.pairs);
        CHECK(schedule_admissible(in, schedule));
        int lit = 0;
        for (const auto& s : schedule) lit += static_cast<int>(s.size());
        CHECK(lit > 0);
    }
}

TEST_CASE("each beam serves its own users from its own carriers") {
    const test::Instance in = test::generated(desk_config(), 3);
    const BhPlan plan = solve_bh(in.scenario, in.rates, in.pairs);
    const auto& s = in.scenario;
    for (int l = 0; l < s.num_clusters(); ++l) {
        const auto& cl = s.clusters[l];
        const int lit = static_cast<int>(plan.schedule[l].size());
        for (int beam : cl.beam_ids) {
            std::vector<int> carriers;
            for (int c = 0; c < int(cl.carrier_ids.size()); ++c)
                if (s.carriers[cl.carrier_ids[c]].home_beam == beam) carriers.push_back(c);
            int units = 0;
            for (int u = 0; u < int(cl.user_ids.size()); ++u) {
                const int uid = cl.user_ids[u];
                if (s.users[uid].beam_id != beam) continue;
                units += plan.user_slots[uid];
                double rate = 0;
                for (int c : carriers) rate += in.rates.cluster(l).per_slot(c, u);
                rate /= carriers.size();
                CHECK(plan.user_supply[uid] == doctest::Approx(plan.user_slots[uid] * rate).epsilon(1e-12));
            }
            CHECK(units == lit * static_cast<int>(carriers.size()));
        }
        double sum = 0;
        for (int uid : cl.user_ids) sum += plan.user_supply[uid];
        CHECK(plan.cluster_supply[l] == sum);
    }

    const AllocationPlan alloc = plan.to_allocation(s);
    CHECK(alloc.scheme == "bh");
    CHECK(audit_schedule(alloc, s.config.active_clusters_per_slot, in.pairs).empty());
    for (std::size_t u = 0; u < s.users.size(); ++u) {
        for (const auto& share : alloc.carriers[u]) {
            CHECK(s.carriers[share.carrier_id].home_beam == s.users[u].beam_id);
            CHECK(share.fill > 0);
            CHECK(share.fill <= 1);
        }
    }
}

TEST_CASE("stage one program layout") {
    const test::Instance in = test::tiny(1);
    const LinearProgram lp = build_schedule_program(in.scenario, capacities(in), in.pairs);
    CHECK(lp.binary_columns().size() == 4);
    CHECK(lp.columns[0].name == "z_1_1");
    CHECK(lp.columns.back().name == "theta");
    CHECK_THROWS_AS(build_schedule_program(in.scenario, {1.0}, in.pairs), StructuralError);
}

TEST_CASE("start assignment lights the schedule and respects the carrier cap") {
    const test::Instance in = test::generated(desk_config(), 2);
    const ModelInstance m = in.model();
    const auto schedule = greedy_schedule(in.scenario, capacities(in), in.pairs);
    const auto x = schedule_start(m, in.scenario, schedule);
    const auto& cat = m.catalog;
    for (int l = 0; l < cat.num_clusters(); ++l) {
        for (int t = 0; t < cat.num_slots(); ++t)
            CHECK(x[cat.z(l, t)] == (std::count(schedule[l].begin(), schedule[l].end(), t) ? 1.0 : 0.0));
        for (int u = 0; u < cat.num_users(l); ++u) {
            int held = 0;
            for (int c = 0; c < cat.num_carriers(l); ++c) held += x[cat.a(l, c, u)] == 1.0;
            CHECK(held == std::min(m.delta_max, cat.num_carriers(l)));
        }
    }
}

}
