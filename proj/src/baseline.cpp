#include "bhca/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bhca/errors.hpp"

namespace bhca {

namespace {

std::vector<int> home_carriers(const Scenario& s, int l, int beam) {
    std::vector<int> local;
    const auto& ids = s.clusters[l].carrier_ids;
    for (int c = 0; c < static_cast<int>(ids.size()); ++c)
        if (s.carriers[ids[c]].home_beam == beam) local.push_back(c);
    return local;
}

std::vector<int> beam_users(const Scenario& s, int l, int beam) {
    std::vector<int> local;
    const auto& ids = s.clusters[l].user_ids;
    for (int u = 0; u < static_cast<int>(ids.size()); ++u)
        if (s.users[ids[u]].beam_id == beam) local.push_back(u);
    return local;
}

// Per-slot rate of local user u on its beam's carriers (mean when a beam owns several).
double home_rate(const ClusterRates& cr, const std::vector<int>& carriers, int u) {
    double r = 0;
    for (int c : carriers) r += cr.per_slot(c, u);
    return carriers.empty() ? 0.0 : r / carriers.size();
}

}  // namespace

double cluster_slot_capacity(const Scenario& s, const RateTable& rates, int l) {
    const auto& cr = rates.cluster(l);
    double capacity = 0;
    for (int beam : s.clusters[l].beam_ids) {
        const auto users = beam_users(s, l, beam);
        if (users.empty()) continue;
        for (int c : home_carriers(s, l, beam)) {
            double sum = 0;
            for (int u : users) sum += cr.per_slot(c, u);
            capacity += sum / users.size();
        }
    }
    return capacity;
}

std::vector<int> distribute_slots(int slots, std::span<const double> demands) {
    const int n = static_cast<int>(demands.size());
    std::vector<int> out(n, 0);
    if (n == 0 || slots <= 0) return out;

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    if (slots <= n) {
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return demands[a] > demands[b]; });
        for (int k = 0; k < slots; ++k) out[order[k]] = 1;
        return out;
    }

    const double total = std::accumulate(demands.begin(), demands.end(), 0.0);
    std::vector<double> remainder(n);
    int given = 0;
    for (int u = 0; u < n; ++u) {
        const double quota = total > 0 ? slots * demands[u] / total : double(slots) / n;
        out[u] = static_cast<int>(std::floor(quota));
        remainder[u] = quota - out[u];
        given += out[u];
    }
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return remainder[a] > remainder[b]; });
    for (int k = 0; given < slots; ++k, ++given) ++out[order[k % n]];
    return out;
}

LinearProgram build_schedule_program(const Scenario& s, const std::vector<double>& capacity,
                                     const std::vector<ClusterPair>& pairs, double epsilon_tiebreak) {
    const int L = s.num_clusters();
    const int T = s.num_slots();
    if (static_cast<int>(capacity.size()) != L) throw StructuralError("capacity vector does not match the clusters");

    LinearProgram lp;
    for (int l = 0; l < L; ++l)
        for (int t = 0; t < T; ++t) lp.add_column("z_" + std::to_string(l + 1) + "_" + std::to_string(t + 1), 0, 1, true);
    const int r0 = lp.num_columns();
    for (int l = 0; l < L; ++l) lp.add_column("r_" + std::to_string(l + 1), 0, kInf);
    const int theta = lp.add_column("theta", -kInf, kInf);
    auto z = [T](int l, int t) { return l * T + t; };

    for (int t = 0; t < T; ++t) {
        std::vector<Term> terms;
        for (int l = 0; l < L; ++l) terms.push_back({z(l, t), 1.0});
        lp.add_row(std::move(terms), Sense::less_equal, s.config.active_clusters_per_slot, "C3",
                   "C3_" + std::to_string(t + 1));
    }
    for (const auto& [a, b] : pairs) {
        for (int t = 0; t < T; ++t) {
            lp.add_row({{z(a, t), 1.0}, {z(b, t), 1.0}}, Sense::less_equal, 1.0, "C6",
                       "C6_" + std::to_string(a + 1) + "_" + std::to_string(b + 1) + "_" + std::to_string(t + 1));
        }
    }
    for (int l = 0; l < L; ++l) {
        const double d = s.cluster_demand(l);
        std::vector<Term> terms;
        for (int t = 0; t < T; ++t) terms.push_back({z(l, t), capacity[l] / d});
        terms.push_back({r0 + l, -1.0});
        lp.add_row(std::move(terms), Sense::greater_equal, 0.0, "ratio", "ratio_" + std::to_string(l + 1));
        lp.add_row({{theta, 1.0}, {r0 + l, -1.0}}, Sense::less_equal, 0.0, "min", "min_" + std::to_string(l + 1));
    }
    lp.objective.push_back({theta, 1.0});
    for (int l = 0; l < L; ++l) lp.objective.push_back({r0 + l, epsilon_tiebreak});
    lp.objective = normalize_terms(std::move(lp.objective));
    return lp;
}

std::vector<std::vector<int>> greedy_schedule(const Scenario& s, const std::vector<double>& capacity,
                                              const std::vector<ClusterPair>& pairs) {
    const int L = s.num_clusters();
    std::vector<std::vector<int>> schedule(L);
    std::vector<std::vector<bool>> conflict(L, std::vector<bool>(L, false));
    for (const auto& [a, b] : pairs) conflict[a][b] = conflict[b][a] = true;
    std::vector<double> ratio(L, 0.0);
    std::vector<int> order(L);
    for (int t = 0; t < s.num_slots(); ++t) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return ratio[a] < ratio[b]; });
        std::vector<int> lit;
        for (int l : order) {
            if (static_cast<int>(lit.size()) >= s.config.active_clusters_per_slot) break;
            if (std::any_of(lit.begin(), lit.end(), [&](int k) { return conflict[l][k]; })) continue;
            lit.push_back(l);
            schedule[l].push_back(t);
            ratio[l] += capacity[l] / s.cluster_demand(l);
        }
    }
    return schedule;
}

std::vector<double> schedule_start(const ModelInstance& model, const Scenario& s,
                                   const std::vector<std::vector<int>>& schedule) {
    const auto& cat = model.catalog;
    if (static_cast<int>(schedule.size()) != cat.num_clusters()) throw StructuralError("schedule does not match the model");
    std::vector<double> x(model.program.num_columns(), 0.0);
    for (int l = 0; l < cat.num_clusters(); ++l) {
        for (int t : schedule[l]) x[cat.z(l, t)] = 1.0;
        for (int u = 0; u < cat.num_users(l); ++u) {
            const int beam = s.users[s.clusters[l].user_ids[u]].beam_id;
            std::vector<int> order = home_carriers(s, l, beam);
            for (int c = 0; c < cat.num_carriers(l); ++c)
                if (std::find(order.begin(), order.end(), c) == order.end()) order.push_back(c);
            const int take = std::min<int>(model.delta_max, static_cast<int>(order.size()));
            for (int k = 0; k < take; ++k) x[cat.a(l, order[k], u)] = 1.0;
        }
    }
    return x;
}

BhPlan solve_bh(const Scenario& s, const RateTable& rates, const std::vector<ClusterPair>& pairs,
                const SolverOptions& options) {
    check_rates(s, rates);
    const int L = s.num_clusters();
    const int T = s.num_slots();
    BhPlan plan;
    for (int l = 0; l < L; ++l) plan.cluster_capacity.push_back(cluster_slot_capacity(s, rates, l));

    const LinearProgram program = build_schedule_program(s, plan.cluster_capacity, pairs);
    SolverOptions stage1 = options;
    stage1.start.assign(program.num_columns(), 0.0);
    const auto greedy = greedy_schedule(s, plan.cluster_capacity, pairs);
    for (int l = 0; l < L; ++l)
        for (int t : greedy[l]) stage1.start[l * T + t] = 1.0;
    plan.stage1 = solve_milp(program, stage1);
    if (!plan.stage1.has_solution()) throw SolverError("beam-hopping schedule has no solution");

    plan.schedule.resize(L);
    for (int l = 0; l < L; ++l)
        for (int t = 0; t < T; ++t)
            if (std::round(plan.stage1.values[l * T + t]) == 1.0) plan.schedule[l].push_back(t);

    plan.user_slots.assign(s.users.size(), 0);
    plan.user_supply.assign(s.users.size(), 0.0);
    plan.cluster_supply.assign(L, 0.0);
    for (int l = 0; l < L; ++l) {
        const auto& cl = s.clusters[l];
        const auto& cr = rates.cluster(l);
        const int lit = static_cast<int>(plan.schedule[l].size());
        for (int beam : cl.beam_ids) {
            const auto carriers = home_carriers(s, l, beam);
            const auto users = beam_users(s, l, beam);
            std::vector<double> demands;
            for (int u : users) demands.push_back(s.users[cl.user_ids[u]].demand);
            const auto units = distribute_slots(lit * static_cast<int>(carriers.size()), demands);
            for (std::size_t k = 0; k < users.size(); ++k) {
                const int uid = cl.user_ids[users[k]];
                plan.user_slots[uid] = units[k];
                plan.user_supply[uid] = units[k] * home_rate(cr, carriers, users[k]);
            }
        }
        for (int uid : cl.user_ids) plan.cluster_supply[l] += plan.user_supply[uid];
        plan.total_supply += plan.cluster_supply[l];
    }
    return plan;
}

AllocationPlan BhPlan::to_allocation(const Scenario& s) const {
    AllocationPlan out;
    out.scheme = "bh";
    out.schedule = schedule;
    out.carriers.resize(s.users.size());
    for (int l = 0; l < s.num_clusters(); ++l) {
        const auto& cl = s.clusters[l];
        const int lit = static_cast<int>(schedule[l].size());
        for (int uid : cl.user_ids) {
            if (user_slots[uid] == 0) continue;
            const auto carriers = home_carriers(s, l, s.users[uid].beam_id);
            const double fill = double(user_slots[uid]) / (double(lit) * carriers.size());
            for (int c : carriers) out.carriers[uid].push_back({cl.carrier_ids[c], fill});
        }
    }
    out.user_supply = user_supply;
    out.cluster_supply = cluster_supply;
    out.total_supply = total_supply;
    return out;
}

}  // namespace bhca
