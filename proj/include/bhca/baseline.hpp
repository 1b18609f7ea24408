#pragma once

#include <span>
#include <vector>

#include "bhca/branch_bound.hpp"
#include "bhca/link_budget.hpp"
#include "bhca/model.hpp"
#include "bhca/plan.hpp"
#include "bhca/scenario.hpp"

namespace bhca {

/**
 * Conventional beam hopping: whole clusters are scheduled, each beam is
 * served only by its own carrier(s), and every slot of a carrier goes to a
 * single user of that beam.
 */
struct BhPlan {
    std::vector<std::vector<int>> schedule;  // per cluster: lit slots, ascending
    std::vector<int> user_slots;             // per user: slot units on its beam's carriers
    std::vector<double> user_supply;         // bits per hopping window
    std::vector<double> cluster_supply;
    double total_supply = 0;
    std::vector<double> cluster_capacity;    // R_l, bits per lit slot
    MilpSolution stage1;                     // the reduced schedule MILP

    AllocationPlan to_allocation(const Scenario& scenario) const;
};

/// Per-slot capacity of cluster l when each of its carriers serves an average user of its home beam.
double cluster_slot_capacity(const Scenario& scenario, const RateTable& rates, int l);

/**
 * Splits `slots` among users with the given demands. More slots than users:
 * proportional to demand with largest-remainder rounding (ties to the lower
 * index). Otherwise one slot each in descending demand order until the slots
 * run out (ties to the lower index).
 */
std::vector<int> distribute_slots(int slots, std::span<const double> demands);

/// Max-min schedule over z only, subject to the per-slot cluster cap and non-adjacency.
LinearProgram build_schedule_program(const Scenario& scenario, const std::vector<double>& capacity,
                                     const std::vector<ClusterPair>& pairs, double epsilon_tiebreak = 1e-4);

/**
 * Deterministic greedy schedule: slot by slot, clusters in ascending order of
 * the ratio they have reached so far join while the slot cap and the
 * adjacency pairs allow.
 */
std::vector<std::vector<int>> greedy_schedule(const Scenario& scenario, const std::vector<double>& capacity,
                                              const std::vector<ClusterPair>& pairs);

/**
 * Starting assignment for the BH-CA model that lights `schedule` and lets each
 * user hold up to delta_max carriers, home carriers first. Continuous columns
 * are left at zero for the solver to complete.
 */
std::vector<double> schedule_start(const ModelInstance& model, const Scenario& scenario,
                                   const std::vector<std::vector<int>>& schedule);

BhPlan solve_bh(const Scenario& scenario, const RateTable& rates, const std::vector<ClusterPair>& pairs,
                const SolverOptions& options = {});

}  // namespace bhca
