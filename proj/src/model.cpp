#include "bhca/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bhca/errors.hpp"

namespace bhca {

namespace {

std::string join_name(const char* prefix, std::initializer_list<int> zero_based) {
    std::string s = prefix;
    for (int i : zero_based) {
        s += '_';
        s += std::to_string(i + 1);
    }
    return s;
}

}  // namespace

VariableCatalog::VariableCatalog(std::vector<int> carriers_per_cluster, std::vector<int> users_per_cluster,
                                 int num_slots)
    : carriers_(std::move(carriers_per_cluster)), users_(std::move(users_per_cluster)), slots_(num_slots) {
    if (carriers_.size() != users_.size()) throw StructuralError("catalog: cluster count mismatch");
    if (slots_ < 1) throw StructuralError("catalog: need at least one slot");
    pair_offset_.resize(carriers_.size());
    for (std::size_t l = 0; l < carriers_.size(); ++l) {
        pair_offset_[l] = pair_total_;
        pair_total_ += carriers_[l] * users_[l];
    }
    const int clusters = num_clusters();
    a_base_ = 0;
    beta_base_ = a_base_ + pair_total_;
    z_base_ = beta_base_ + pair_total_;
    q_base_ = z_base_ + clusters * slots_;
    t_upper_base_ = q_base_ + pair_total_ * slots_;
    t_lower_ = t_upper_base_ + clusters;
    theta_ = t_lower_ + 1;
}

std::string VariableCatalog::name(int col) const {
    auto decode_pair = [&](int p, int& l, int& c, int& u) {
        l = static_cast<int>(std::upper_bound(pair_offset_.begin(), pair_offset_.end(), p) - pair_offset_.begin()) - 1;
        const int local = p - pair_offset_[l];
        c = local / users_[l];
        u = local % users_[l];
    };
    int l = 0, c = 0, u = 0;
    if (col < beta_base_) {
        decode_pair(col - a_base_, l, c, u);
        return join_name("a", {l, c, u});
    }
    if (col < z_base_) {
        decode_pair(col - beta_base_, l, c, u);
        return join_name("beta", {l, c, u});
    }
    if (col < q_base_) {
        const int k = col - z_base_;
        return join_name("z", {k / slots_, k % slots_});
    }
    if (col < t_upper_base_) {
        const int k = col - q_base_;
        decode_pair(k / slots_, l, c, u);
        return join_name("q", {l, c, u, k % slots_});
    }
    if (col < t_lower_) return join_name("tU", {col - t_upper_base_});
    if (col == t_lower_) return "tL";
    if (col == theta_) return "theta";
    throw StructuralError("catalog: column " + std::to_string(col) + " out of range");
}

ModelInstance build_model(const Scenario& s, const RateTable& rates, const std::vector<ClusterPair>& pairs,
                          const ModelParams& params) {
    check_rates(s, rates);
    const int L = s.num_clusters();
    const int T = s.num_slots();
    for (const auto& [n1, n2] : pairs) {
        if (n1 < 0 || n2 >= L || n1 >= n2) throw StructuralError("adjacency pair out of range or not canonical");
    }
    std::vector<int> nc(L), nu(L);
    for (int l = 0; l < L; ++l) {
        nc[l] = static_cast<int>(s.clusters[l].carrier_ids.size());
        nu[l] = static_cast<int>(s.clusters[l].user_ids.size());
    }
    for (const auto& u : s.users) {
        if (!(u.demand > 0)) throw ConfigError("demand", "user " + std::to_string(u.id) + " has non-positive demand");
    }

    ModelInstance m;
    m.catalog = VariableCatalog(nc, nu, T);
    m.params = params;
    m.delta_max = s.config.delta_max;
    m.max_active_clusters = s.config.active_clusters_per_slot;
    m.pairs = pairs;
    const auto& cat = m.catalog;
    auto& lp = m.program;

    lp.columns.resize(cat.size());
    for (int j = 0; j < cat.size(); ++j) lp.columns[j].name = cat.name(j);
    for (int l = 0; l < L; ++l) {
        for (int c = 0; c < nc[l]; ++c) {
            for (int u = 0; u < nu[l]; ++u) {
                lp.columns[cat.a(l, c, u)] = {lp.columns[cat.a(l, c, u)].name, 0.0, 1.0, true};
                lp.columns[cat.beta(l, c, u)] = {lp.columns[cat.beta(l, c, u)].name, 0.0, 1.0, false};
                for (int t = 0; t < T; ++t) lp.columns[cat.q(l, c, u, t)] = {lp.columns[cat.q(l, c, u, t)].name, 0.0, 1.0, false};
            }
        }
        for (int t = 0; t < T; ++t) lp.columns[cat.z(l, t)] = {lp.columns[cat.z(l, t)].name, 0.0, 1.0, true};
        lp.columns[cat.t_upper(l)] = {lp.columns[cat.t_upper(l)].name, 0.0, kInf, false};
    }
    lp.columns[cat.t_lower()] = {"tL", 0.0, kInf, false};
    lp.columns[cat.theta()] = {"theta", -kInf, kInf, false};

    // C1: carriers per user capped by delta_max.
    for (int l = 0; l < L; ++l) {
        for (int u = 0; u < nu[l]; ++u) {
            std::vector<Term> terms;
            for (int c = 0; c < nc[l]; ++c) terms.push_back({cat.a(l, c, u), 1.0});
            lp.add_row(std::move(terms), Sense::less_equal, m.delta_max, "C1", join_name("C1", {l, u}));
        }
    }
    // C2: fill-rates of one carrier sum to at most 1.
    for (int l = 0; l < L; ++l) {
        for (int c = 0; c < nc[l]; ++c) {
            std::vector<Term> terms;
            for (int u = 0; u < nu[l]; ++u) terms.push_back({cat.beta(l, c, u), 1.0});
            lp.add_row(std::move(terms), Sense::less_equal, 1.0, "C2", join_name("C2", {l, c}));
        }
    }
    // C3: at most N_T active clusters per slot.
    for (int t = 0; t < T; ++t) {
        std::vector<Term> terms;
        for (int l = 0; l < L; ++l) terms.push_back({cat.z(l, t), 1.0});
        lp.add_row(std::move(terms), Sense::less_equal, m.max_active_clusters, "C3", join_name("C3", {t}));
    }
    // C4: s_{u,l} / d_{u,l} >= t_U(l), with s linear in q.
    for (int l = 0; l < L; ++l) {
        const auto& cr = rates.cluster(l);
        for (int u = 0; u < nu[l]; ++u) {
            const double d = s.users[s.clusters[l].user_ids[u]].demand;
            std::vector<Term> terms;
            for (int c = 0; c < nc[l]; ++c)
                for (int t = 0; t < T; ++t) terms.push_back({cat.q(l, c, u, t), cr.per_slot(c, u) / d});
            terms.push_back({cat.t_upper(l), -1.0});
            lp.add_row(std::move(terms), Sense::greater_equal, 0.0, "C4", join_name("C4", {l, u}));
        }
    }
    // C5: s_l / d_l >= t_L.
    for (int l = 0; l < L; ++l) {
        const auto& cr = rates.cluster(l);
        const double d = s.cluster_demand(l);
        std::vector<Term> terms;
        for (int u = 0; u < nu[l]; ++u)
            for (int c = 0; c < nc[l]; ++c)
                for (int t = 0; t < T; ++t) terms.push_back({cat.q(l, c, u, t), cr.per_slot(c, u) / d});
        terms.push_back({cat.t_lower(), -1.0});
        lp.add_row(std::move(terms), Sense::greater_equal, 0.0, "C5", join_name("C5", {l}));
    }
    // C6: adjacent clusters are never lit together.
    for (const auto& [n1, n2] : pairs) {
        for (int t = 0; t < T; ++t) {
            lp.add_row({{cat.z(n1, t), 1.0}, {cat.z(n2, t), 1.0}}, Sense::less_equal, 1.0, "C6",
                       join_name("C6", {n1, n2, t}));
        }
    }
    // C7: beta = 0 when a = 0, beta >= eps when a = 1.
    for (int l = 0; l < L; ++l) {
        for (int c = 0; c < nc[l]; ++c) {
            for (int u = 0; u < nu[l]; ++u) {
                lp.add_row({{cat.beta(l, c, u), 1.0}, {cat.a(l, c, u), -params.big_m}}, Sense::less_equal, 0.0, "C7-a",
                           join_name("C7a", {l, c, u}));
                lp.add_row({{cat.beta(l, c, u), 1.0}, {cat.a(l, c, u), -1.0}}, Sense::greater_equal,
                           params.epsilon_fill - 1.0, "C7-b", join_name("C7b", {l, c, u}));
            }
        }
    }
    // C8: theta bounds every ratio objective.
    for (int l = 0; l < L; ++l) {
        lp.add_row({{cat.theta(), 1.0}, {cat.t_upper(l), -1.0}}, Sense::less_equal, 0.0, "C8-a", join_name("C8a", {l}));
    }
    lp.add_row({{cat.theta(), 1.0}, {cat.t_lower(), -1.0}}, Sense::less_equal, 0.0, "C8-b", "C8b");
    // C9: q = beta * z for binary z.
    for (int l = 0; l < L; ++l) {
        for (int c = 0; c < nc[l]; ++c) {
            for (int u = 0; u < nu[l]; ++u) {
                for (int t = 0; t < T; ++t) {
                    const int q = cat.q(l, c, u, t), z = cat.z(l, t), b = cat.beta(l, c, u);
                    lp.add_row({{q, 1.0}}, Sense::greater_equal, 0.0, "C9-a", join_name("C9a", {l, c, u, t}));
                    lp.add_row({{q, 1.0}, {z, -1.0}}, Sense::less_equal, 0.0, "C9-b", join_name("C9b", {l, c, u, t}));
                    lp.add_row({{q, 1.0}, {b, -1.0}}, Sense::less_equal, 0.0, "C9-c", join_name("C9c", {l, c, u, t}));
                    lp.add_row({{q, 1.0}, {b, -1.0}, {z, -1.0}}, Sense::greater_equal, -1.0, "C9-d",
                               join_name("C9d", {l, c, u, t}));
                }
            }
        }
    }

    lp.objective.push_back({cat.theta(), 1.0});
    for (int l = 0; l < L; ++l) lp.objective.push_back({cat.t_upper(l), params.epsilon_tiebreak});
    lp.objective.push_back({cat.t_lower(), params.epsilon_tiebreak});
    lp.objective = normalize_terms(std::move(lp.objective));
    return m;
}

ViolationReport validate_solution(const LinearProgram& lp, const std::vector<double>& x, double tol) {
    if (x.size() != lp.columns.size()) {
        throw StructuralError("assignment has " + std::to_string(x.size()) + " values, model has " +
                              std::to_string(lp.columns.size()) + " columns");
    }
    ViolationReport report;
    for (int i = 0; i < lp.num_rows(); ++i) {
        const double v = row_violation(lp.rows[i], x);
        if (v > tol || std::isnan(v)) report.violations.push_back({Violation::Kind::row, i, lp.rows[i].name, v});
    }
    for (int j = 0; j < lp.num_columns(); ++j) {
        const auto& col = lp.columns[j];
        const double v = std::max(col.lower - x[j], x[j] - col.upper);
        if (v > tol || std::isnan(x[j])) report.violations.push_back({Violation::Kind::bound, j, col.name, v});
        if (col.binary) {
            const double f = std::min(std::abs(x[j]), std::abs(1.0 - x[j]));
            if (f > tol) report.violations.push_back({Violation::Kind::integrality, j, col.name, f});
        }
    }
    return report;
}

ViolationReport validate_solution(const ModelInstance& model, const std::vector<double>& x, double tol) {
    return validate_solution(model.program, x, tol);
}

std::string ViolationReport::summary(std::size_t max_lines) const {
    if (violations.empty()) return "feasible";
    std::ostringstream os;
    os << violations.size() << " violation(s)";
    for (std::size_t k = 0; k < violations.size() && k < max_lines; ++k) {
        const auto& v = violations[k];
        const char* kind = v.kind == Violation::Kind::row ? "row" : v.kind == Violation::Kind::bound ? "bound" : "integrality";
        os << "\n  " << kind << ' ' << v.name << " by " << v.amount;
    }
    return os.str();
}

}  // namespace bhca
