#include "bhca/link_budget.hpp"

#include <cmath>
#include <numbers>

#include "bhca/errors.hpp"

namespace bhca {

namespace {

constexpr double kBoltzmannDb = -228.6;  // dBW/K/Hz
constexpr double kSpeedOfLight = 299792458.0;

double free_space_loss_db(double range_m, double frequency_hz) {
    return 20.0 * std::log10(4.0 * std::numbers::pi * range_m * frequency_hz / kSpeedOfLight);
}

RateTable allocate(const Scenario& s) {
    RateTable t;
    t.clusters.resize(s.clusters.size());
    for (std::size_t l = 0; l < s.clusters.size(); ++l) {
        auto& cr = t.clusters[l];
        cr.num_carriers = static_cast<int>(s.clusters[l].carrier_ids.size());
        cr.num_users = static_cast<int>(s.clusters[l].user_ids.size());
        const auto n = static_cast<std::size_t>(cr.num_carriers) * cr.num_users;
        cr.sinr_db.assign(n, 0.0);
        cr.rate_bps.assign(n, 0.0);
        cr.rate_per_slot.assign(n, 0.0);
    }
    return t;
}

void fill_entry(const Scenario& s, const ModcodTable& modcod, int l, int c, int u, ClusterRates& out) {
    const auto& cl = s.clusters[l];
    const double sinr = link_sinr_db(s, s.carriers[cl.carrier_ids[c]], s.users[cl.user_ids[u]]);
    const double rate = rate_from_sinr(sinr, s.config.symbol_rate(), modcod);
    const auto k = out.index(c, u);
    out.sinr_db[k] = sinr;
    out.rate_bps[k] = rate;
    out.rate_per_slot[k] = rate * s.config.slot_duration;
}

}  // namespace

double rate_from_sinr(double sinr_db, double symbol_rate, const ModcodTable& modcod) {
    return symbol_rate * modcod.spectral_efficiency(sinr_db);
}

double beam_rolloff_db(double offset_km, double beam_spacing_km) {
    const double edge = beam_spacing_km / std::numbers::sqrt3;
    const double r = offset_km / edge;
    return 3.0 * r * r;
}

double link_sinr_db(const Scenario& s, const Carrier& carrier, const User& user) {
    const auto& cfg = s.config;
    const auto& beam = s.beams[carrier.home_beam];
    const double offset = std::hypot(user.x_km - beam.x_km, user.y_km - beam.y_km);
    const double carrier_power = cfg.power_per_transponder - 10.0 * std::log10(double(cfg.carriers_per_transponder()));
    const double eirp = carrier_power + cfg.peak_gain_dbi - beam_rolloff_db(offset, cfg.beam_spacing_km);
    const double c_n0 = eirp - free_space_loss_db(cfg.slant_range, cfg.carrier_frequency) - cfg.extra_losses_db +
                        cfg.user_g_over_t_dbk - kBoltzmannDb;
    return c_n0 - 10.0 * std::log10(carrier.bandwidth);
}

RateTable compute_rate_table(const Scenario& s, const ModcodTable& modcod) {
    RateTable t = allocate(s);
    struct Entry {
        int l, c, u;
    };
    std::vector<Entry> entries;
    for (int l = 0; l < s.num_clusters(); ++l)
        for (int c = 0; c < t.clusters[l].num_carriers; ++c)
            for (int u = 0; u < t.clusters[l].num_users; ++u) entries.push_back({l, c, u});

    const auto n = static_cast<std::ptrdiff_t>(entries.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < n; ++k) {
        const auto& e = entries[k];
        fill_entry(s, modcod, e.l, e.c, e.u, t.clusters[e.l]);
    }
    return t;
}

RateTable compute_rate_table_serial(const Scenario& s, const ModcodTable& modcod) {
    RateTable t = allocate(s);
    for (int l = 0; l < s.num_clusters(); ++l)
        for (int c = 0; c < t.clusters[l].num_carriers; ++c)
            for (int u = 0; u < t.clusters[l].num_users; ++u) fill_entry(s, modcod, l, c, u, t.clusters[l]);
    return t;
}

void check_rates(const Scenario& s, const RateTable& rates) {
    if (rates.clusters.size() != s.clusters.size()) {
        throw StructuralError("rate table has " + std::to_string(rates.clusters.size()) + " clusters, scenario has " +
                              std::to_string(s.clusters.size()));
    }
    for (std::size_t l = 0; l < s.clusters.size(); ++l) {
        const auto& cr = rates.clusters[l];
        const auto n = static_cast<std::size_t>(cr.num_carriers) * cr.num_users;
        if (cr.num_carriers != int(s.clusters[l].carrier_ids.size()) ||
            cr.num_users != int(s.clusters[l].user_ids.size()) || cr.rate_per_slot.size() != n ||
            cr.rate_bps.size() != n) {
            throw StructuralError("rate table shape mismatch in cluster " + std::to_string(l));
        }
        for (double r : cr.rate_per_slot) {
            if (!(r >= 0)) throw StructuralError("negative or NaN rate in cluster " + std::to_string(l));
        }
    }
}

nlohmann::json rates_to_json(const RateTable& rates) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& cr : rates.clusters) {
        out.push_back({{"num_carriers", cr.num_carriers},
                       {"num_users", cr.num_users},
                       {"sinr_db", cr.sinr_db},
                       {"rate_bps", cr.rate_bps}});
    }
    return out;
}

RateTable rates_from_json(const nlohmann::json& doc, double slot_duration) {
    RateTable t;
    try {
        for (const auto& j : doc) {
            ClusterRates cr;
            cr.num_carriers = j.at("num_carriers").get<int>();
            cr.num_users = j.at("num_users").get<int>();
            cr.rate_bps = j.at("rate_bps").get<std::vector<double>>();
            const auto n = static_cast<std::size_t>(cr.num_carriers) * cr.num_users;
            cr.sinr_db = j.contains("sinr_db") ? j.at("sinr_db").get<std::vector<double>>() : std::vector<double>(n, 0.0);
            if (cr.rate_bps.size() != n || cr.sinr_db.size() != n) {
                throw StructuralError("rate table entry count does not match num_carriers * num_users");
            }
            cr.rate_per_slot.resize(n);
            for (std::size_t k = 0; k < n; ++k) cr.rate_per_slot[k] = cr.rate_bps[k] * slot_duration;
            t.clusters.push_back(std::move(cr));
        }
    } catch (const nlohmann::json::exception& e) {
        throw StructuralError(std::string("malformed rate table: ") + e.what());
    }
    return t;
}

}  // namespace bhca
