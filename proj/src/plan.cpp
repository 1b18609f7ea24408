#include "bhca/plan.hpp"

#include <algorithm>
#include <cmath>

namespace bhca {

int AllocationPlan::active_in_slot(int t) const {
    int n = 0;
    for (const auto& slots : schedule) n += std::binary_search(slots.begin(), slots.end(), t) ? 1 : 0;
    return n;
}

AllocationPlan decode_plan(const ModelInstance& model, const std::vector<double>& x, const Scenario& s,
                           const RateTable& rates) {
    check_rates(s, rates);
    const auto& catalog = model.catalog;
    if (catalog.num_clusters() != s.num_clusters()) throw StructuralError("model and scenario cluster counts differ");
    for (int l = 0; l < s.num_clusters(); ++l) {
        if (catalog.num_carriers(l) != int(s.clusters[l].carrier_ids.size()) ||
            catalog.num_users(l) != int(s.clusters[l].user_ids.size())) {
            throw StructuralError("model and scenario disagree on cluster " + std::to_string(l));
        }
    }
    ViolationReport report = validate_solution(model, x);
    if (!report.feasible()) throw InfeasiblePlanError(std::move(report));

    const auto& cat = model.catalog;
    const int L = cat.num_clusters();
    const int T = cat.num_slots();
    AllocationPlan plan;
    plan.scheme = "bhca";
    plan.schedule.resize(L);
    plan.carriers.resize(s.users.size());
    plan.user_supply.assign(s.users.size(), 0.0);
    plan.cluster_supply.assign(L, 0.0);

    for (int l = 0; l < L; ++l) {
        const auto& cl = s.clusters[l];
        const auto& cr = rates.cluster(l);
        for (int t = 0; t < T; ++t)
            if (std::round(x[cat.z(l, t)]) == 1.0) plan.schedule[l].push_back(t);
        for (int u = 0; u < cat.num_users(l); ++u) {
            const int uid = cl.user_ids[u];
            double supply = 0;
            for (int c = 0; c < cat.num_carriers(l); ++c) {
                if (std::round(x[cat.a(l, c, u)]) == 1.0) plan.carriers[uid].push_back({cl.carrier_ids[c], x[cat.beta(l, c, u)]});
                for (int t = 0; t < T; ++t) supply += x[cat.q(l, c, u, t)] * cr.per_slot(c, u);
            }
            plan.user_supply[uid] = supply;
            plan.cluster_supply[l] += supply;
        }
        plan.total_supply += plan.cluster_supply[l];
    }
    return plan;
}

std::vector<std::string> audit_schedule(const AllocationPlan& plan, int max_active,
                                        const std::vector<ClusterPair>& pairs) {
    std::vector<std::string> issues;
    int horizon = 0;
    for (const auto& slots : plan.schedule)
        if (!slots.empty()) horizon = std::max(horizon, slots.back() + 1);
    for (int t = 0; t < horizon; ++t) {
        const int n = plan.active_in_slot(t);
        if (n > max_active) {
            issues.push_back("slot " + std::to_string(t) + ": " + std::to_string(n) + " clusters lit, limit " +
                             std::to_string(max_active));
        }
        for (const auto& [a, b] : pairs) {
            const auto& sa = plan.schedule[a];
            const auto& sb = plan.schedule[b];
            if (std::binary_search(sa.begin(), sa.end(), t) && std::binary_search(sb.begin(), sb.end(), t)) {
                issues.push_back("slot " + std::to_string(t) + ": adjacent clusters " + std::to_string(a) + " and " +
                                 std::to_string(b) + " lit together");
            }
        }
    }
    return issues;
}

nlohmann::json plan_to_json(const AllocationPlan& plan) {
    nlohmann::json doc;
    doc["scheme"] = plan.scheme;
    doc["total_supply_bphw"] = plan.total_supply;
    auto& clusters = doc["clusters"] = nlohmann::json::array();
    for (std::size_t l = 0; l < plan.schedule.size(); ++l) {
        clusters.push_back({{"id", l}, {"slots", plan.schedule[l]}, {"supply_bphw", plan.cluster_supply[l]}});
    }
    auto& users = doc["users"] = nlohmann::json::array();
    for (std::size_t u = 0; u < plan.user_supply.size(); ++u) {
        auto shares = nlohmann::json::array();
        for (const auto& cs : plan.carriers[u]) shares.push_back({{"carrier", cs.carrier_id}, {"fill", cs.fill}});
        users.push_back({{"id", u}, {"carriers", shares}, {"supply_bphw", plan.user_supply[u]}});
    }
    return doc;
}

}  // namespace bhca
