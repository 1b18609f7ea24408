#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "bhca/plan.hpp"
#include "bhca/scenario.hpp"

namespace bhca {

/// Jain's index (sum z)^2 / (N sum z^2). Throws std::invalid_argument for empty, negative, non-finite or all-zero input.
double jain_index(std::span<const double> ratios);

struct RatioEntry {
    int id = 0;
    double demand = 0;  // bits per hopping window
    double supply = 0;
    double ratio = 0;
    double jain = 0;    // over the member users; NaN when every member has zero supply
};

struct MetricsReport {
    std::string scheme;
    std::vector<RatioEntry> users;     // jain unused
    std::vector<RatioEntry> clusters;
    std::vector<RatioEntry> beams;
    double total_demand = 0;
    double total_supply = 0;
    double unused_capacity = 0;       // sum over users of max(0, s - d), bphw
    double unused_capacity_mbps = 0;
    double beam_overshoot = 0;        // sum over beams of max(0, s - d), bphw
    double min_user_ratio = 0;
    double min_cluster_ratio = 0;
    double jain_user = 0;             // pooled over every user
    double jain_cluster = 0;          // over cluster ratios
    double jain_beam = 0;             // over beam ratios
};

/// Throws ConfigError when a user demand is not positive.
MetricsReport build_report(const AllocationPlan& plan, const Scenario& scenario);

nlohmann::json report_to_json(const MetricsReport& report);
/// Columns scope,id,demand_bphw,supply_bphw,ratio,jain; one row per user, per cluster, and a system row.
std::string report_to_csv(const MetricsReport& report);

}  // namespace bhca
