#include "bhca/run.hpp"

#include <cstdio>
#include <fstream>

#include <openssl/evp.h>
#include <spdlog/spdlog.h>

#include "bhca/errors.hpp"
#include "bhca/lp_format.hpp"
#include "bhca/modcod.hpp"

namespace bhca {

const char* to_string(Scheme scheme) {
    switch (scheme) {
        case Scheme::bhca: return "bhca";
        case Scheme::bh: return "bh";
        case Scheme::both: return "both";
    }
    return "?";
}

Scheme scheme_from(const std::string& s) {
    if (s == "bhca") return Scheme::bhca;
    if (s == "bh") return Scheme::bh;
    if (s == "both") return Scheme::both;
    throw ConfigError("scheme", "unknown scheme '" + s + "' (expected bhca, bh or both)");
}

bool Evaluation::limit_hit() const {
    const bool a = milp && milp->status != MilpStatus::optimal;
    const bool b = bh_plan && bh->stage1.status != MilpStatus::optimal;
    return a || b;
}

Evaluation evaluate(const SystemConfig& config, Scheme scheme, const SolverOptions& options) {
    Scenario scenario = generate_scenario(config);
    RateTable rates = compute_rate_table(scenario, default_modcod_table());
    return evaluate_scenario(std::move(scenario), std::move(rates), scheme, options);
}

Evaluation evaluate_scenario(Scenario scenario, RateTable rates, Scheme scheme, const SolverOptions& options) {
    Evaluation e;
    e.scenario = std::move(scenario);
    e.rates = std::move(rates);
    e.pairs = adjacency_pairs(e.scenario);

    if (includes_bh(scheme) || includes_bhca(scheme)) {
        e.bh = solve_bh(e.scenario, e.rates, e.pairs, options);
    }
    if (includes_bhca(scheme)) {
        e.model = build_model(e.scenario, e.rates, e.pairs);
        SolverOptions seeded = options;
        seeded.start = schedule_start(*e.model, e.scenario, e.bh->schedule);
        e.milp = solve_milp(*e.model, seeded);
        if (!e.milp->has_solution()) {
            throw SolverError(std::string("BH-CA search ended without a feasible plan (status ") +
                              to_string(e.milp->status) + ")");
        }
        e.bhca_plan = decode_plan(*e.model, e.milp->values, e.scenario, e.rates);
        e.bhca_metrics = build_report(*e.bhca_plan, e.scenario);
    }
    if (includes_bh(scheme)) {
        e.bh_plan = e.bh->to_allocation(e.scenario);
        e.bh_metrics = build_report(*e.bh_plan, e.scenario);
    }
    return e;
}

namespace {

std::string dump(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

nlohmann::json solver_json(const SolverOptions& o) {
    return {{"integrality_tol", o.integrality_tol},
            {"feas_tol", o.feas_tol},
            {"node_limit", o.node_limit},
            {"time_limit", o.time_limit},
            {"branch_rule", to_string(o.branch_rule)},
            {"node_order", to_string(o.node_order)},
            {"worker_count", o.worker_count}};
}

nlohmann::json milp_json(const MilpSolution& m) {
    return {{"status", to_string(m.status)},
            {"objective", m.objective},
            {"best_bound", m.best_bound},
            {"gap", m.gap},
            {"root_bound", m.root_bound},
            {"nodes_explored", m.nodes_explored},
            {"lp_iterations", m.lp_iterations}};
}

std::string solver_log(const MilpSolution& m) {
    std::string out;
    for (const auto& line : m.log) out += line + '\n';
    out += std::string("status=") + to_string(m.status) + " nodes=" + std::to_string(m.nodes_explored) +
           " objective=" + fmt(m.objective) + '\n';
    return out;
}

// Per-beam demand and supply in Mbps plus the beam Jain index, one column pair per scheme.
std::string beam_plot_csv(const Evaluation& e) {
    const double window = e.scenario.config.hopping_window();
    std::string out = "beam,cluster,demand_mbps";
    if (e.bh_metrics) out += ",bh_supply_mbps,bh_jain";
    if (e.bhca_metrics) out += ",bhca_supply_mbps,bhca_jain";
    out += '\n';
    auto jain = [](double v) { return v == v ? fmt(v) : std::string(); };
    for (std::size_t b = 0; b < e.scenario.beams.size(); ++b) {
        const double demand = (e.bh_metrics ? e.bh_metrics : e.bhca_metrics)->beams[b].demand;
        out += std::to_string(b) + ',' + std::to_string(e.scenario.beams[b].cluster_id) + ',' + fmt(demand / window / 1e6);
        if (e.bh_metrics) {
            const auto& r = e.bh_metrics->beams[b];
            out += ',' + fmt(r.supply / window / 1e6) + ',' + jain(r.jain);
        }
        if (e.bhca_metrics) {
            const auto& r = e.bhca_metrics->beams[b];
            out += ',' + fmt(r.supply / window / 1e6) + ',' + jain(r.jain);
        }
        out += '\n';
    }
    return out;
}

std::string user_plot_csv(const Evaluation& e) {
    std::string out = "user,cluster,beam,high_demand,demand_mbps";
    if (e.bh_metrics) out += ",bh_ratio";
    if (e.bhca_metrics) out += ",bhca_ratio";
    out += '\n';
    const double window = e.scenario.config.hopping_window();
    for (const auto& u : e.scenario.users) {
        out += std::to_string(u.id) + ',' + std::to_string(u.cluster_id) + ',' + std::to_string(u.beam_id) + ',' +
               (u.high_demand ? "1" : "0") + ',' + fmt(u.demand / window / 1e6);
        if (e.bh_metrics) out += ',' + fmt(e.bh_metrics->users[u.id].ratio);
        if (e.bhca_metrics) out += ',' + fmt(e.bhca_metrics->users[u.id].ratio);
        out += '\n';
    }
    return out;
}

nlohmann::json comparison_json(const Evaluation& e) {
    const double window = e.scenario.config.hopping_window();
    auto side = [&](const MetricsReport& r) {
        return nlohmann::json{{"total_supply_mbps", r.total_supply / window / 1e6},
                              {"unused_capacity_mbps", r.unused_capacity_mbps},
                              {"min_user_ratio", r.min_user_ratio},
                              {"min_cluster_ratio", r.min_cluster_ratio},
                              {"jain_user", r.jain_user},
                              {"jain_beam", r.jain_beam}};
    };
    return {{"total_demand_mbps", e.bh_metrics->total_demand / window / 1e6},
            {"bh", side(*e.bh_metrics)},
            {"bhca", side(*e.bhca_metrics)},
            {"bhca_jain_not_worse", e.bhca_metrics->jain_user >= e.bh_metrics->jain_user},
            {"bhca_min_ratio_not_worse", e.bhca_metrics->min_user_ratio >= e.bh_metrics->min_user_ratio}};
}

}  // namespace

ArtifactSet render_artifacts(const Evaluation& e, const RunManifest& m) {
    ArtifactSet a;
    a["scenario.json"] = dump({{"scenario", scenario_to_json(e.scenario)},
                               {"rates", rates_to_json(e.rates)},
                               {"adjacency", e.pairs}});
    if (e.milp) {
        if (m.export_lp) a["bhca_model.lp"] = export_lp(*e.model);
        a["bhca_solver.log"] = solver_log(*e.milp);
        auto plan = plan_to_json(*e.bhca_plan);
        plan["solver"] = milp_json(*e.milp);
        a["bhca_plan.json"] = dump(plan);
        a["bhca_metrics.json"] = dump(report_to_json(*e.bhca_metrics));
        a["bhca_metrics.csv"] = report_to_csv(*e.bhca_metrics);
    }
    if (e.bh_plan) {
        a["bh_solver.log"] = solver_log(e.bh->stage1);
        auto plan = plan_to_json(*e.bh_plan);
        plan["user_slots"] = e.bh->user_slots;
        plan["solver"] = milp_json(e.bh->stage1);
        a["bh_plan.json"] = dump(plan);
        a["bh_metrics.json"] = dump(report_to_json(*e.bh_metrics));
        a["bh_metrics.csv"] = report_to_csv(*e.bh_metrics);
    }
    if (e.milp && e.bh_plan) a["comparison.json"] = dump(comparison_json(e));
    a["plot_beams.csv"] = beam_plot_csv(e);
    a["plot_users.csv"] = user_plot_csv(e);
    return a;
}

std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 digest failed");
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 15];
    }
    return out;
}

SystemConfig resolve_config(const RunManifest& m) {
    SystemConfig config = m.config_path.empty() ? desk_config() : load_config(m.config_path);
    config.rng_seed = m.seed;
    require_valid(config);
    return config;
}

int run(RunManifest& m) {
    const SystemConfig config = resolve_config(m);
    m.solver.validate();
    spdlog::info("run: scheme={} seed={} beams={} clusters={} slots={}", to_string(m.scheme), m.seed, config.num_beams,
                 config.num_clusters, config.slots_per_window);

    const Evaluation eval = evaluate(config, m.scheme, m.solver);
    ArtifactSet artifacts = render_artifacts(eval, m);
    const bool limit = eval.limit_hit();
    if (limit) spdlog::warn("a solver stopped on its node or time limit; results carry a gap");

    m.checksums.clear();
    for (const auto& [name, content] : artifacts) m.checksums[name] = sha256_hex(content);
    nlohmann::json manifest{{"config_path", m.config_path},
                            {"config", config_to_json(config)},
                            {"seed", m.seed},
                            {"scheme", to_string(m.scheme)},
                            {"output_directory", m.out_dir.string()},
                            {"solver", solver_json(m.solver)},
                            {"export_lp", m.export_lp},
                            {"status", limit ? "limit_hit" : "ok"},
                            {"checksums", m.checksums}};
    artifacts["manifest.json"] = dump(manifest);

    std::filesystem::create_directories(m.out_dir);
    for (const auto& [name, content] : artifacts) {
        std::ofstream f(m.out_dir / name, std::ios::binary);
        f << content;
        if (!f) throw std::runtime_error("cannot write " + (m.out_dir / name).string());
    }
    spdlog::info("run: wrote {} files to {}", artifacts.size(), m.out_dir.string());
    return limit ? kExitLimitHit : kExitOk;
}

std::vector<BatchRow> run_batch(const SystemConfig& config, const std::vector<std::uint64_t>& seeds,
                                const SolverOptions& options, int parallel_scenarios) {
    std::vector<BatchRow> rows(seeds.size());
    std::vector<std::string> errors(seeds.size());
    SolverOptions single = options;
    single.worker_count = 1;
    const int n = static_cast<int>(seeds.size());
#pragma omp parallel for num_threads(parallel_scenarios) schedule(dynamic, 1) if (parallel_scenarios > 1)
    for (int k = 0; k < n; ++k) {
        try {
            SystemConfig c = config;
            c.rng_seed = seeds[k];
            const Evaluation e = evaluate(c, Scheme::both, single);
            BatchRow& r = rows[k];
            r.seed = seeds[k];
            r.bhca_status = to_string(e.milp->status);
            r.bhca_gap = e.milp->gap;
            r.bhca_jain_user = e.bhca_metrics->jain_user;
            r.bh_jain_user = e.bh_metrics->jain_user;
            r.bhca_min_ratio = e.bhca_metrics->min_user_ratio;
            r.bh_min_ratio = e.bh_metrics->min_user_ratio;
            r.bhca_unused = e.bhca_metrics->unused_capacity;
            r.bh_unused = e.bh_metrics->unused_capacity;
            const int cap = c.active_clusters_per_slot;
            r.schedule_violations = static_cast<int>(audit_schedule(*e.bhca_plan, cap, e.pairs).size() +
                                                     audit_schedule(*e.bh_plan, cap, e.pairs).size());
            r.model_violations = static_cast<int>(validate_solution(*e.model, e.milp->values).violations.size());
        } catch (const std::exception& ex) {
            errors[k] = "seed " + std::to_string(seeds[k]) + ": " + ex.what();
        }
    }
    for (const auto& err : errors)
        if (!err.empty()) throw SolverError(err);
    return rows;
}

std::string batch_to_csv(const std::vector<BatchRow>& rows) {
    std::string out =
        "seed,bhca_status,bhca_gap,bhca_jain_user,bh_jain_user,bhca_min_ratio,bh_min_ratio,bhca_unused_bphw,"
        "bh_unused_bphw,schedule_violations,model_violations\n";
    for (const auto& r : rows) {
        out += std::to_string(r.seed) + ',' + r.bhca_status + ',' + fmt(r.bhca_gap) + ',' + fmt(r.bhca_jain_user) + ',' +
               fmt(r.bh_jain_user) + ',' + fmt(r.bhca_min_ratio) + ',' + fmt(r.bh_min_ratio) + ',' +
               fmt(r.bhca_unused) + ',' + fmt(r.bh_unused) + ',' + std::to_string(r.schedule_violations) + ',' +
               std::to_string(r.model_violations) + '\n';
    }
    return out;
}

}  // namespace bhca
