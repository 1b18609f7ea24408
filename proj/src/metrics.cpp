#include "bhca/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "bhca/errors.hpp"

namespace bhca {

double jain_index(std::span<const double> z) {
    if (z.empty()) throw std::invalid_argument("jain_index of an empty list");
    double sum = 0, sq = 0;
    for (double v : z) {
        if (!std::isfinite(v) || v < 0) throw std::invalid_argument("jain_index needs finite non-negative ratios");
        sum += v;
        sq += v * v;
    }
    if (sq == 0) throw std::invalid_argument("jain_index is undefined when every ratio is zero");
    return sum * sum / (z.size() * sq);
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double jain_or_nan(const std::vector<double>& z) {
    for (double v : z)
        if (v > 0) return jain_index(z);
    return kNaN;
}

double min_of(const std::vector<RatioEntry>& entries) {
    double m = kInf;
    for (const auto& e : entries) m = std::min(m, e.ratio);
    return m;
}

std::string fmt(double v) {
    if (std::isnan(v)) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

nlohmann::json num(double v) { return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v); }

nlohmann::json entries_json(const std::vector<RatioEntry>& entries, bool with_jain) {
    auto out = nlohmann::json::array();
    for (const auto& e : entries) {
        nlohmann::json row{{"id", e.id}, {"demand_bphw", e.demand}, {"supply_bphw", e.supply}, {"ratio", e.ratio}};
        if (with_jain) row["jain"] = num(e.jain);
        out.push_back(row);
    }
    return out;
}

}  // namespace

MetricsReport build_report(const AllocationPlan& plan, const Scenario& s) {
    if (plan.user_supply.size() != s.users.size() || plan.schedule.size() != s.clusters.size()) {
        throw StructuralError("plan does not match the scenario");
    }
    MetricsReport r;
    r.scheme = plan.scheme;

    std::vector<double> user_ratio(s.users.size());
    for (const auto& u : s.users) {
        if (!(u.demand > 0)) throw ConfigError("demand", "user " + std::to_string(u.id) + " has non-positive demand");
        const double supply = plan.user_supply[u.id];
        user_ratio[u.id] = supply / u.demand;
        r.users.push_back({u.id, u.demand, supply, user_ratio[u.id], kNaN});
        r.unused_capacity += std::max(0.0, supply - u.demand);
    }

    std::vector<double> cluster_ratio, beam_ratio;
    for (const auto& cl : s.clusters) {
        RatioEntry e{cl.id, 0, 0, 0, 0};
        std::vector<double> members;
        for (int uid : cl.user_ids) {
            e.demand += s.users[uid].demand;
            e.supply += plan.user_supply[uid];
            members.push_back(user_ratio[uid]);
        }
        e.ratio = e.supply / e.demand;
        e.jain = jain_or_nan(members);
        cluster_ratio.push_back(e.ratio);
        r.clusters.push_back(e);
        r.total_demand += e.demand;
        r.total_supply += e.supply;
    }
    for (const auto& b : s.beams) {
        RatioEntry e{b.id, 0, 0, 0, 0};
        std::vector<double> members;
        for (int uid : s.clusters[b.cluster_id].user_ids) {
            if (s.users[uid].beam_id != b.id) continue;
            e.demand += s.users[uid].demand;
            e.supply += plan.user_supply[uid];
            members.push_back(user_ratio[uid]);
        }
        e.ratio = e.demand > 0 ? e.supply / e.demand : kNaN;
        e.jain = members.empty() ? kNaN : jain_or_nan(members);
        if (e.demand > 0) beam_ratio.push_back(e.ratio);
        r.beam_overshoot += std::max(0.0, e.supply - e.demand);
        r.beams.push_back(e);
    }

    r.unused_capacity_mbps = r.unused_capacity / s.config.hopping_window() / 1e6;
    r.min_user_ratio = min_of(r.users);
    r.min_cluster_ratio = min_of(r.clusters);
    r.jain_user = jain_or_nan(user_ratio);
    r.jain_cluster = jain_or_nan(cluster_ratio);
    r.jain_beam = beam_ratio.empty() ? kNaN : jain_or_nan(beam_ratio);
    return r;
}

nlohmann::json report_to_json(const MetricsReport& r) {
    return {
        {"scheme", r.scheme},
        {"system",
         {{"total_demand_bphw", r.total_demand},
          {"total_supply_bphw", r.total_supply},
          {"unused_capacity_bphw", r.unused_capacity},
          {"unused_capacity_mbps", r.unused_capacity_mbps},
          {"beam_overshoot_bphw", r.beam_overshoot},
          {"min_user_ratio", r.min_user_ratio},
          {"min_cluster_ratio", r.min_cluster_ratio},
          {"jain_user", num(r.jain_user)},
          {"jain_cluster", num(r.jain_cluster)},
          {"jain_beam", num(r.jain_beam)}}},
        {"users", entries_json(r.users, false)},
        {"clusters", entries_json(r.clusters, true)},
        {"beams", entries_json(r.beams, true)},
    };
}

std::string report_to_csv(const MetricsReport& r) {
    std::string out = "scope,id,demand_bphw,supply_bphw,ratio,jain\n";
    auto row = [&](const char* scope, const std::string& id, double d, double s, double ratio, double jain) {
        out += std::string(scope) + ',' + id + ',' + fmt(d) + ',' + fmt(s) + ',' + fmt(ratio) + ',' + fmt(jain) + '\n';
    };
    for (const auto& e : r.users) row("user", std::to_string(e.id), e.demand, e.supply, e.ratio, kNaN);
    for (const auto& e : r.clusters) row("cluster", std::to_string(e.id), e.demand, e.supply, e.ratio, e.jain);
    row("system", "all", r.total_demand, r.total_supply, r.total_supply / r.total_demand, r.jain_user);
    return out;
}

}  // namespace bhca
