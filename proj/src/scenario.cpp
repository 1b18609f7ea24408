#include "bhca/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "bhca/errors.hpp"

namespace bhca {

namespace {

constexpr double kSqrt3 = 1.7320508075688772;

double distance(const Beam& a, const Beam& b) { return std::hypot(a.x_km - b.x_km, a.y_km - b.y_km); }

// Beam centres on a triangular lattice (hexagonal cells), unit pitch, row-major.
std::vector<Beam> lay_out_beams(const SystemConfig& c) {
    const int clusters_per_row = std::max(1, static_cast<int>(std::floor(std::sqrt(double(c.num_clusters)))));
    const int beams_per_row = clusters_per_row * c.beams_per_cluster;
    std::vector<Beam> beams(c.num_beams);
    for (int b = 0; b < c.num_beams; ++b) {
        const int row = b / beams_per_row;
        const int col = b % beams_per_row;
        beams[b].id = b;
        beams[b].x_km = (col + (row % 2 ? 0.5 : 0.0)) * c.beam_spacing_km;
        beams[b].y_km = row * (kSqrt3 / 2.0) * c.beam_spacing_km;
    }
    return beams;
}

// Greedy nearest-neighbour grouping; ties go to the lowest beam index.
std::vector<Cluster> match_clusters(std::vector<Beam>& beams, int beams_per_cluster) {
    std::vector<Cluster> clusters;
    std::vector<bool> taken(beams.size(), false);
    for (std::size_t seed = 0; seed < beams.size(); ++seed) {
        if (taken[seed]) continue;
        Cluster cl;
        cl.id = static_cast<int>(clusters.size());
        cl.beam_ids.push_back(static_cast<int>(seed));
        taken[seed] = true;
        while (static_cast<int>(cl.beam_ids.size()) < beams_per_cluster) {
            int best = -1;
            double best_d = std::numeric_limits<double>::infinity();
            for (std::size_t b = 0; b < beams.size(); ++b) {
                if (taken[b]) continue;
                double d = std::numeric_limits<double>::infinity();
                for (int m : cl.beam_ids) d = std::min(d, distance(beams[b], beams[m]));
                if (d < best_d - 1e-9) {
                    best_d = d;
                    best = static_cast<int>(b);
                }
            }
            if (best < 0) break;
            cl.beam_ids.push_back(best);
            taken[best] = true;
        }
        for (int b : cl.beam_ids) beams[b].cluster_id = cl.id;
        clusters.push_back(std::move(cl));
    }
    return clusters;
}

// Uniform point in a pointy-top hexagonal cell of circumradius pitch/sqrt(3).
std::pair<double, double> sample_in_cell(std::mt19937_64& rng, double pitch) {
    const double circumradius = 1.0 / kSqrt3;
    std::uniform_real_distribution<double> ux(-0.5, 0.5);
    std::uniform_real_distribution<double> uy(-circumradius, circumradius);
    for (;;) {
        const double x = ux(rng);
        const double y = uy(rng);
        if (std::abs(y) <= circumradius - std::abs(x) / kSqrt3) return {x * pitch, y * pitch};
    }
}

const char* to_string(Polarization p) { return p == Polarization::lhcp ? "LHCP" : "RHCP"; }

Polarization polarization_from(const std::string& s) {
    if (s == "LHCP") return Polarization::lhcp;
    if (s == "RHCP") return Polarization::rhcp;
    throw StructuralError("unknown polarization '" + s + "'");
}

}  // namespace

double Scenario::cluster_demand(int l) const {
    double d = 0;
    for (int u : clusters.at(l).user_ids) d += users[u].demand;
    return d;
}

double Scenario::total_demand() const {
    double d = 0;
    for (int l = 0; l < num_clusters(); ++l) d += cluster_demand(l);
    return d;
}

double fair_share_bits(const SystemConfig& c) {
    const double carriers_per_beam = double(c.carriers_per_cluster) / c.beams_per_cluster;
    const double illumination_ratio = double(c.active_clusters_per_slot) / c.num_clusters;
    return c.symbol_rate() * c.reference_spectral_efficiency * carriers_per_beam * c.hopping_window() *
           illumination_ratio / c.users_per_beam;
}

Scenario generate_scenario(const SystemConfig& config) {
    require_valid(config);
    Scenario s;
    s.config = config;
    s.beams = lay_out_beams(config);
    s.clusters = match_clusters(s.beams, config.beams_per_cluster);

    for (auto& cl : s.clusters) {
        for (int k = 0; k < config.carriers_per_cluster; ++k) {
            Carrier c;
            c.id = static_cast<int>(s.carriers.size());
            c.cluster_id = cl.id;
            c.home_beam = cl.beam_ids[k % cl.beam_ids.size()];
            c.polarization = (k % 2 == 0) ? Polarization::lhcp : Polarization::rhcp;
            c.bandwidth = config.carrier_bandwidth;
            cl.carrier_ids.push_back(c.id);
            s.carriers.push_back(c);
        }
    }

    std::mt19937_64 rng(config.rng_seed);
    for (auto& cl : s.clusters) {
        for (int b : cl.beam_ids) {
            for (int k = 0; k < config.users_per_beam; ++k) {
                User u;
                u.id = static_cast<int>(s.users.size());
                u.cluster_id = cl.id;
                u.beam_id = b;
                auto [dx, dy] = sample_in_cell(rng, config.beam_spacing_km);
                u.x_km = s.beams[b].x_km + dx;
                u.y_km = s.beams[b].y_km + dy;
                cl.user_ids.push_back(u.id);
                s.users.push_back(u);
            }
        }
    }

    const auto n_users = s.users.size();
    const auto n_high = static_cast<std::size_t>(std::llround(config.high_demand_fraction * double(n_users)));
    std::vector<std::size_t> order(n_users);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t k = 0; k < n_high; ++k) s.users[order[k]].high_demand = true;

    const double share = fair_share_bits(config);
    std::uniform_real_distribution<double> high(config.high_demand_min, config.high_demand_max);
    std::uniform_real_distribution<double> low(config.low_demand_min, config.low_demand_max);
    for (auto& u : s.users) u.demand = share * (u.high_demand ? high(rng) : low(rng));
    return s;
}

std::vector<ClusterPair> adjacency_pairs(const Scenario& s) {
    const double threshold = s.config.adjacency_threshold * s.config.beam_spacing_km;
    std::vector<ClusterPair> pairs;
    for (int a = 0; a < s.num_clusters(); ++a) {
        for (int b = a + 1; b < s.num_clusters(); ++b) {
            double d = std::numeric_limits<double>::infinity();
            for (int i : s.clusters[a].beam_ids)
                for (int j : s.clusters[b].beam_ids) d = std::min(d, distance(s.beams[i], s.beams[j]));
            if (d < threshold) pairs.emplace_back(a, b);
        }
    }
    return pairs;
}

void check_scenario(const Scenario& s) {
    auto expect = [](bool ok, const std::string& what) {
        if (!ok) throw StructuralError(what);
    };
    for (std::size_t i = 0; i < s.beams.size(); ++i) expect(s.beams[i].id == int(i), "beam ids must be 0..N-1");
    for (std::size_t i = 0; i < s.carriers.size(); ++i)
        expect(s.carriers[i].id == int(i), "carrier ids must be 0..N-1");
    for (std::size_t i = 0; i < s.users.size(); ++i) expect(s.users[i].id == int(i), "user ids must be 0..N-1");

    std::vector<int> beam_seen(s.beams.size(), 0), carrier_seen(s.carriers.size(), 0), user_seen(s.users.size(), 0);
    for (int l = 0; l < s.num_clusters(); ++l) {
        const auto& cl = s.clusters[l];
        expect(cl.id == l, "cluster ids must be 0..L-1");
        expect(!cl.carrier_ids.empty(), "cluster " + std::to_string(l) + " has no carriers");
        for (int b : cl.beam_ids) {
            expect(b >= 0 && b < int(s.beams.size()), "cluster references unknown beam");
            expect(s.beams[b].cluster_id == l, "beam cluster_id disagrees with cluster membership");
            ++beam_seen[b];
        }
        for (int c : cl.carrier_ids) {
            expect(c >= 0 && c < int(s.carriers.size()), "cluster references unknown carrier");
            expect(s.carriers[c].cluster_id == l, "carrier cluster_id disagrees with cluster membership");
            ++carrier_seen[c];
        }
        for (int u : cl.user_ids) {
            expect(u >= 0 && u < int(s.users.size()), "cluster references unknown user");
            expect(s.users[u].cluster_id == l, "user cluster_id disagrees with cluster membership");
            ++user_seen[u];
        }
    }
    auto all_once = [](const std::vector<int>& v) { return std::all_of(v.begin(), v.end(), [](int n) { return n == 1; }); };
    expect(all_once(beam_seen), "clusters must partition the beams");
    expect(all_once(carrier_seen), "every carrier must belong to exactly one cluster");
    expect(all_once(user_seen), "every user must belong to exactly one cluster");
}

nlohmann::json scenario_to_json(const Scenario& s) {
    using nlohmann::json;
    json beams = json::array(), carriers = json::array(), users = json::array(), clusters = json::array();
    for (const auto& b : s.beams) beams.push_back({{"id", b.id}, {"cluster", b.cluster_id}, {"x_km", b.x_km}, {"y_km", b.y_km}});
    for (const auto& c : s.carriers) {
        carriers.push_back({{"id", c.id},
                            {"cluster", c.cluster_id},
                            {"home_beam", c.home_beam},
                            {"polarization", to_string(c.polarization)},
                            {"bandwidth", c.bandwidth}});
    }
    for (const auto& u : s.users) {
        users.push_back({{"id", u.id},
                         {"cluster", u.cluster_id},
                         {"beam", u.beam_id},
                         {"x_km", u.x_km},
                         {"y_km", u.y_km},
                         {"demand_bphw", u.demand},
                         {"high_demand", u.high_demand}});
    }
    for (const auto& cl : s.clusters) {
        clusters.push_back({{"id", cl.id}, {"beams", cl.beam_ids}, {"carriers", cl.carrier_ids}, {"users", cl.user_ids}});
    }
    return {{"config", config_to_json(s.config)},
            {"beams", beams},
            {"carriers", carriers},
            {"users", users},
            {"clusters", clusters}};
}

Scenario scenario_from_json(const nlohmann::json& doc) {
    Scenario s;
    try {
        s.config = config_from_json(doc.at("config"));
        for (const auto& b : doc.at("beams")) {
            s.beams.push_back({b.at("id").get<int>(), b.at("cluster").get<int>(), b.at("x_km").get<double>(),
                               b.at("y_km").get<double>()});
        }
        for (const auto& c : doc.at("carriers")) {
            s.carriers.push_back({c.at("id").get<int>(), c.at("cluster").get<int>(), c.at("home_beam").get<int>(),
                                  polarization_from(c.at("polarization").get<std::string>()),
                                  c.at("bandwidth").get<double>()});
        }
        for (const auto& u : doc.at("users")) {
            s.users.push_back({u.at("id").get<int>(), u.at("cluster").get<int>(), u.at("beam").get<int>(),
                               u.at("x_km").get<double>(), u.at("y_km").get<double>(),
                               u.at("demand_bphw").get<double>(), u.value("high_demand", false)});
        }
        for (const auto& cl : doc.at("clusters")) {
            s.clusters.push_back({cl.at("id").get<int>(), cl.at("beams").get<std::vector<int>>(),
                                  cl.at("carriers").get<std::vector<int>>(), cl.at("users").get<std::vector<int>>()});
        }
    } catch (const nlohmann::json::exception& e) {
        throw StructuralError(std::string("malformed scenario document: ") + e.what());
    }
    check_scenario(s);
    return s;
}

}  // namespace bhca
