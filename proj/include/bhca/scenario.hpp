#pragma once

#include <utility>
#include <vector>

#include <json.hpp>

#include "bhca/config.hpp"

namespace bhca {

enum class Polarization { lhcp, rhcp };

struct Beam {
    int id = 0;
    int cluster_id = 0;
    double x_km = 0;
    double y_km = 0;
};

struct Carrier {
    int id = 0;
    int cluster_id = 0;
    int home_beam = 0;  // beam this carrier serves in the conventional (no-CA) scheme
    Polarization polarization = Polarization::lhcp;
    double bandwidth = 0;  // Hz
};

struct User {
    int id = 0;
    int cluster_id = 0;
    int beam_id = 0;
    double x_km = 0;
    double y_km = 0;
    double demand = 0;  // bits per hopping window
    bool high_demand = false;
};

/// A non-overlapping group of adjacent beams illuminated as a unit. Ids are global indices.
struct Cluster {
    int id = 0;
    std::vector<int> beam_ids;
    std::vector<int> carrier_ids;
    std::vector<int> user_ids;
};

/// Canonical cluster pair (first < second) that must not be co-illuminated.
using ClusterPair = std::pair<int, int>;

/**
 * Immutable scenario description. Built by generate_scenario or
 * scenario_from_json; treat as read-only afterwards.
 */
struct Scenario {
    SystemConfig config;
    std::vector<Beam> beams;
    std::vector<Carrier> carriers;
    std::vector<User> users;
    std::vector<Cluster> clusters;

    int num_clusters() const { return static_cast<int>(clusters.size()); }
    int num_slots() const { return config.slots_per_window; }

    double cluster_demand(int l) const;
    double total_demand() const;
};

/**
 * Deterministic scenario for `config` (seeded by config.rng_seed): beams on
 * a hexagonal lattice, clusters by nearest-neighbour matching, users uniform
 * in their beam cell, and round(high_demand_fraction * users) high-demand users.
 */
Scenario generate_scenario(const SystemConfig& config);

/// Pairs of clusters whose closest beam centres are nearer than adjacency_threshold pitches.
std::vector<ClusterPair> adjacency_pairs(const Scenario& scenario);

/// Mean per-user share of a beam's time-averaged capacity over one hopping window (bits).
double fair_share_bits(const SystemConfig& config);

nlohmann::json scenario_to_json(const Scenario& scenario);
/// Inverse of scenario_to_json. Structural inconsistencies raise StructuralError.
Scenario scenario_from_json(const nlohmann::json& doc);

/// Checks id consistency and the partition invariants; throws StructuralError.
void check_scenario(const Scenario& scenario);

}  // namespace bhca
