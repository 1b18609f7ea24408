#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bhca/baseline.hpp"
#include "bhca/branch_bound.hpp"
#include "bhca/config.hpp"
#include "bhca/link_budget.hpp"
#include "bhca/metrics.hpp"
#include "bhca/model.hpp"
#include "bhca/plan.hpp"
#include "bhca/scenario.hpp"

namespace bhca {

enum class Scheme { bhca, bh, both };

const char* to_string(Scheme scheme);
Scheme scheme_from(const std::string& s);

inline bool includes_bhca(Scheme s) { return s != Scheme::bh; }
inline bool includes_bh(Scheme s) { return s != Scheme::bhca; }

/// Everything needed to reproduce one run, plus the checksums of what it wrote.
struct RunManifest {
    std::string config_path;  // empty: built-in desk configuration
    std::uint64_t seed = 1;
    Scheme scheme = Scheme::both;
    std::filesystem::path out_dir = "out";
    SolverOptions solver;
    bool export_lp = false;
    std::map<std::string, std::string> checksums;  // file name -> SHA-256 hex
};

/// In-memory result of both pipelines on one scenario.
struct Evaluation {
    Scenario scenario;
    RateTable rates;
    std::vector<ClusterPair> pairs;

    std::optional<ModelInstance> model;
    std::optional<MilpSolution> milp;
    std::optional<AllocationPlan> bhca_plan;
    std::optional<MetricsReport> bhca_metrics;

    std::optional<BhPlan> bh;  // also solved for scheme bhca: its schedule seeds the BH-CA search
    std::optional<AllocationPlan> bh_plan;
    std::optional<MetricsReport> bh_metrics;

    /// A solver stopped on a node or time limit.
    bool limit_hit() const;
};

/**
 * Generates the scenario for `config`, then solves the requested schemes.
 * The BH-CA search starts from the baseline schedule with every user holding
 * up to delta_max carriers. Throws SolverError when it ends without an incumbent.
 */
Evaluation evaluate(const SystemConfig& config, Scheme scheme, const SolverOptions& options);

/// Same pipeline on a given scenario and rate table (e.g. a committed snapshot).
Evaluation evaluate_scenario(Scenario scenario, RateTable rates, Scheme scheme, const SolverOptions& options);

/// Artifact file name -> content, in write order.
using ArtifactSet = std::map<std::string, std::string>;

ArtifactSet render_artifacts(const Evaluation& eval, const RunManifest& manifest);

std::string sha256_hex(const std::string& data);

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitLimitHit = 2;
inline constexpr int kExitRuntimeError = 3;

/**
 * Loads and validates the config, evaluates, writes every artifact plus
 * manifest.json into manifest.out_dir, and fills manifest.checksums.
 * Config problems throw ConfigError or ParseError before anything is written.
 * Returns kExitOk or kExitLimitHit.
 */
int run(RunManifest& manifest);

/// Config selected by a manifest: the file when given, the desk preset otherwise. Seed applied.
SystemConfig resolve_config(const RunManifest& manifest);

struct BatchRow {
    std::uint64_t seed = 0;
    std::string bhca_status;
    double bhca_gap = 0;
    double bhca_jain_user = 0, bh_jain_user = 0;
    double bhca_min_ratio = 0, bh_min_ratio = 0;
    double bhca_unused = 0, bh_unused = 0;  // bphw
    int schedule_violations = 0;            // C3/C6 audit over both plans
    int model_violations = 0;               // validate_solution on the BH-CA incumbent
};

/// Both schemes on each seed; scenarios run in parallel, each solve single-worker.
std::vector<BatchRow> run_batch(const SystemConfig& config, const std::vector<std::uint64_t>& seeds,
                                const SolverOptions& options, int parallel_scenarios = 1);

std::string batch_to_csv(const std::vector<BatchRow>& rows);

}  // namespace bhca
