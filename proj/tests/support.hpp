#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bhca/config.hpp"
#include "bhca/link_budget.hpp"
#include "bhca/model.hpp"
#include "bhca/scenario.hpp"

namespace test {

inline std::filesystem::path fixture(const std::string& name) { return std::filesystem::path(BHCA_FIXTURE_DIR) / name; }
inline std::filesystem::path data_file(const std::string& name) { return std::filesystem::path(BHCA_DATA_DIR) / name; }

inline std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline nlohmann::json load_json(const std::filesystem::path& path) { return nlohmann::json::parse(slurp(path)); }

struct Instance {
    bhca::Scenario scenario;
    bhca::RateTable rates;
    std::vector<bhca::ClusterPair> pairs;

    bhca::ModelInstance model(const bhca::ModelParams& params = {}) const {
        return bhca::build_model(scenario, rates, pairs, params);
    }
};

inline Instance generated(bhca::SystemConfig config, std::uint64_t seed) {
    config.rng_seed = seed;
    Instance in;
    in.scenario = bhca::generate_scenario(config);
    in.rates = bhca::compute_rate_table(in.scenario, bhca::default_modcod_table());
    in.pairs = bhca::adjacency_pairs(in.scenario);
    return in;
}

inline Instance tiny(std::uint64_t seed) { return generated(bhca::tiny_config(), seed); }

/// A committed scenario snapshot with explicit rates.
inline Instance snapshot(const std::string& name) {
    const auto doc = load_json(fixture(name));
    Instance in;
    in.scenario = bhca::scenario_from_json(doc.at("scenario"));
    in.rates = bhca::rates_from_json(doc.at("rates"), in.scenario.config.slot_duration);
    in.pairs = bhca::adjacency_pairs(in.scenario);
    return in;
}

/**
 * Hand-built scenario that bypasses the config invariants: `carriers` and
 * `users` per cluster, one beam per carrier, every rate set to `rate_bps`,
 * every demand to `demand` bits per window.
 */
inline Instance manual(int clusters, int carriers, int users, int slots, int active, double rate_bps, double demand) {
    Instance in;
    auto& s = in.scenario;
    s.config = bhca::tiny_config();
    s.config.num_clusters = clusters;
    s.config.carriers_per_cluster = carriers;
    s.config.beams_per_cluster = carriers;
    s.config.num_beams = clusters * carriers;
    s.config.slots_per_window = slots;
    s.config.active_clusters_per_slot = active;
    for (int l = 0; l < clusters; ++l) {
        bhca::Cluster cl;
        cl.id = l;
        for (int c = 0; c < carriers; ++c) {
            const int id = l * carriers + c;
            s.beams.push_back({id, l, 1000.0 * id, 0});
            s.carriers.push_back({id, l, id, c % 2 ? bhca::Polarization::rhcp : bhca::Polarization::lhcp,
                                  s.config.carrier_bandwidth});
            cl.beam_ids.push_back(id);
            cl.carrier_ids.push_back(id);
        }
        for (int u = 0; u < users; ++u) {
            const int id = l * users + u;
            const int beam = l * carriers + u % carriers;
            s.users.push_back({id, l, beam, 1000.0 * beam, 0, demand, false});
            cl.user_ids.push_back(id);
        }
        s.clusters.push_back(cl);
        bhca::ClusterRates r;
        r.num_carriers = carriers;
        r.num_users = users;
        r.sinr_db.assign(carriers * users, 20.0);
        r.rate_bps.assign(carriers * users, rate_bps);
        r.rate_per_slot.assign(carriers * users, rate_bps * s.config.slot_duration);
        in.rates.clusters.push_back(r);
    }
    return in;
}

/// Supply of every user recomputed from raw beta and z: sum_c sum_t beta * z * R_slot.
inline std::vector<double> supply_from_raw(const bhca::ModelInstance& m, const Instance& in,
                                           const std::vector<double>& x) {
    const auto& cat = m.catalog;
    std::vector<double> supply(in.scenario.users.size(), 0.0);
    for (int l = 0; l < cat.num_clusters(); ++l)
        for (int u = 0; u < cat.num_users(l); ++u)
            for (int c = 0; c < cat.num_carriers(l); ++c)
                for (int t = 0; t < cat.num_slots(); ++t)
                    supply[in.scenario.clusters[l].user_ids[u]] +=
                        x[cat.beta(l, c, u)] * x[cat.z(l, t)] * in.rates.cluster(l).per_slot(c, u);
    return supply;
}

/**
 * Fills q, t_U, t_L and theta of an assignment whose a, beta and z are set:
 * q = beta * z, and each ratio variable at the tightest value its rows allow.
 */
inline void complete(const bhca::ModelInstance& m, const Instance& in, std::vector<double>& x) {
    const auto& cat = m.catalog;
    const auto supply = supply_from_raw(m, in, x);
    double t_lower = bhca::kInf, theta = bhca::kInf;
    for (int l = 0; l < cat.num_clusters(); ++l) {
        double t_upper = bhca::kInf, cluster_supply = 0;
        for (int u = 0; u < cat.num_users(l); ++u) {
            const auto& user = in.scenario.users[in.scenario.clusters[l].user_ids[u]];
            t_upper = std::min(t_upper, supply[user.id] / user.demand);
            cluster_supply += supply[user.id];
            for (int c = 0; c < cat.num_carriers(l); ++c)
                for (int t = 0; t < cat.num_slots(); ++t) x[cat.q(l, c, u, t)] = x[cat.beta(l, c, u)] * x[cat.z(l, t)];
        }
        x[cat.t_upper(l)] = t_upper;
        theta = std::min(theta, t_upper);
        t_lower = std::min(t_lower, cluster_supply / in.scenario.cluster_demand(l));
    }
    x[cat.t_lower()] = t_lower;
    x[cat.theta()] = std::min(theta, t_lower);
}

}  // namespace test
