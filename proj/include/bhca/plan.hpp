#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "bhca/errors.hpp"
#include "bhca/link_budget.hpp"
#include "bhca/model.hpp"
#include "bhca/scenario.hpp"

namespace bhca {

/// Carrier share granted to one user: global carrier id and fill-rate in (0, 1].
struct CarrierShare {
    int carrier_id = 0;
    double fill = 0;
};

/**
 * Scheme-independent allocation over one hopping window. Ids are global
 * (scenario) indices; supplies are bits per hopping window.
 */
struct AllocationPlan {
    std::string scheme;
    std::vector<std::vector<int>> schedule;            // per cluster: lit slots, ascending
    std::vector<std::vector<CarrierShare>> carriers;   // per user
    std::vector<double> user_supply;                   // per user
    std::vector<double> cluster_supply;                // per cluster, sum of its users in user order
    double total_supply = 0;                           // sum of cluster_supply in cluster order

    /// Number of clusters lit in slot t.
    int active_in_slot(int t) const;
};

/// Decoding refused because the assignment does not satisfy the model.
class InfeasiblePlanError : public SolverError {
public:
    explicit InfeasiblePlanError(ViolationReport report)
        : SolverError("solution violates the model: " + report.summary()), report_(std::move(report)) {}

    const ViolationReport& report() const noexcept { return report_; }

private:
    ViolationReport report_;
};

/**
 * Turns a BH-CA assignment into a plan. User supply is sum over carriers and
 * slots of q * R_slot; cluster and total supplies are plain sums of those.
 * Throws InfeasiblePlanError when validate_solution reports anything and
 * StructuralError when model, scenario and rates do not line up.
 */
AllocationPlan decode_plan(const ModelInstance& model, const std::vector<double>& values, const Scenario& scenario,
                           const RateTable& rates);

/// C3 and C6 audit of a plan's schedule: one message per violated slot.
std::vector<std::string> audit_schedule(const AllocationPlan& plan, int max_active,
                                        const std::vector<ClusterPair>& pairs);

nlohmann::json plan_to_json(const AllocationPlan& plan);

}  // namespace bhca
