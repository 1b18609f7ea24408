#pragma once

#include <vector>

#include <json.hpp>

#include "bhca/modcod.hpp"
#include "bhca/scenario.hpp"

namespace bhca {

/// Rates of one cluster, indexed by (local carrier c, local user u), row-major over c.
struct ClusterRates {
    int num_carriers = 0;
    int num_users = 0;
    std::vector<double> sinr_db;
    std::vector<double> rate_bps;
    std::vector<double> rate_per_slot;  // bits per time slot

    std::size_t index(int c, int u) const { return static_cast<std::size_t>(c) * num_users + u; }
    double sinr(int c, int u) const { return sinr_db[index(c, u)]; }
    double per_second(int c, int u) const { return rate_bps[index(c, u)]; }
    double per_slot(int c, int u) const { return rate_per_slot[index(c, u)]; }

    bool operator==(const ClusterRates&) const = default;
};

/// Per-(cluster, carrier, user) SINR and achievable rate; constant over slots.
struct RateTable {
    std::vector<ClusterRates> clusters;

    const ClusterRates& cluster(int l) const { return clusters.at(l); }
    bool operator==(const RateTable&) const = default;
};

/// Achievable rate in bit/s for a symbol rate and SINR: symbol_rate * f_SE(sinr).
double rate_from_sinr(double sinr_db, double symbol_rate, const ModcodTable& modcod);

/// Off-axis attenuation in dB for a user `offset_km` from the beam centre (3 dB at the cell vertex).
double beam_rolloff_db(double offset_km, double beam_spacing_km);

/// Clear-sky downlink SINR (dB) of `carrier` at the position of `user`. No co-channel interference.
double link_sinr_db(const Scenario& scenario, const Carrier& carrier, const User& user);

/// OpenMP-parallel over all (cluster, carrier, user) entries.
RateTable compute_rate_table(const Scenario& scenario, const ModcodTable& modcod);

/// Serial reference for compute_rate_table; must agree bit-for-bit.
RateTable compute_rate_table_serial(const Scenario& scenario, const ModcodTable& modcod);

/// Throws StructuralError when the table's shape does not match the scenario's clusters.
void check_rates(const Scenario& scenario, const RateTable& rates);

nlohmann::json rates_to_json(const RateTable& rates);
RateTable rates_from_json(const nlohmann::json& doc, double slot_duration);

}  // namespace bhca
