#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "bhca/errors.hpp"
#include "bhca/run.hpp"

namespace {

void setup_logging() {
    auto logger = spdlog::stderr_color_mt("bhca");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::warn);
    if (const char* level = std::getenv("BHCA_LOG")) spdlog::set_level(spdlog::level::from_str(level));
}

struct SolverFlags {
    explicit SolverFlags(long nodes) : node_limit(nodes) {}

    double time_limit = 600;
    long node_limit;
    int workers = 1;
    std::string node_order = "best_bound";
    std::string branch_rule = "most_fractional";

    void attach(CLI::App* app) {
        app->add_option("--time-limit", time_limit, "Solver wall-time limit per MILP, seconds")->check(CLI::PositiveNumber);
        app->add_option("--node-limit", node_limit, "Branch-and-bound node limit per MILP")->check(CLI::PositiveNumber);
        app->add_option("--workers", workers, "Parallel node evaluations")->check(CLI::PositiveNumber);
        app->add_option("--node-order", node_order, "best_bound or depth_first");
        app->add_option("--branch-rule", branch_rule, "most_fractional or lowest_index");
    }

    bhca::SolverOptions options() const {
        bhca::SolverOptions o;
        o.time_limit = time_limit;
        o.node_limit = node_limit;
        o.worker_count = workers;
        o.node_order = bhca::node_order_from(node_order);
        o.branch_rule = bhca::branch_rule_from(branch_rule);
        if (spdlog::should_log(spdlog::level::debug)) {
            o.log_sink = [](const std::string& line) { spdlog::debug("{}", line); };
        }
        return o;
    }
};

}  // namespace

int main(int argc, char** argv) {
    setup_logging();
    CLI::App app{"Joint beam-hopping and carrier-aggregation planner"};
    app.require_subcommand(1);

    bhca::RunManifest manifest;
    std::string scheme = "both";
    SolverFlags run_flags(2000);
    auto* run_cmd = app.add_subcommand("run", "Solve one scenario and write its artifacts");
    run_cmd->add_option("--config", manifest.config_path, "Config JSON (default: built-in desk config)");
    run_cmd->add_option("--seed", manifest.seed, "Scenario seed");
    run_cmd->add_option("--scheme", scheme, "bhca, bh or both")->check(CLI::IsMember({"bhca", "bh", "both"}));
    run_cmd->add_option("--out", manifest.out_dir, "Output directory");
    run_cmd->add_flag("--export-lp", manifest.export_lp, "Also write the BH-CA model in LP format");
    run_flags.attach(run_cmd);

    std::string check_path;
    auto* check_cmd = app.add_subcommand("validate-config", "Check a config file and list every problem");
    check_cmd->add_option("path", check_path, "Config JSON")->required();

    std::string batch_config, batch_out = "batch.csv";
    std::uint64_t first_seed = 1;
    int seed_count = 30, parallel = 1;
    SolverFlags batch_flags(500);
    auto* batch_cmd = app.add_subcommand("batch", "Run both schemes over consecutive seeds and tabulate");
    batch_cmd->add_option("--config", batch_config, "Config JSON (default: built-in desk config)");
    batch_cmd->add_option("--first-seed", first_seed, "First seed");
    batch_cmd->add_option("--count", seed_count, "Number of seeds")->check(CLI::PositiveNumber);
    batch_cmd->add_option("--parallel", parallel, "Scenarios solved concurrently")->check(CLI::PositiveNumber);
    batch_cmd->add_option("--out", batch_out, "Output CSV");
    batch_flags.attach(batch_cmd);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*check_cmd) {
            const auto diagnostics = bhca::validate_config(check_path);
            for (const auto& d : diagnostics) std::cout << d.field << ": " << d.message << '\n';
            if (diagnostics.empty()) std::cout << "ok\n";
            return diagnostics.empty() ? bhca::kExitOk : bhca::kExitConfigError;
        }
        if (*run_cmd) {
            manifest.scheme = bhca::scheme_from(scheme);
            manifest.solver = run_flags.options();
            const int code = bhca::run(manifest);
            for (const auto& [name, sum] : manifest.checksums) std::cout << sum << "  " << name << '\n';
            return code;
        }
        if (*batch_cmd) {
            bhca::RunManifest m;
            m.config_path = batch_config;
            const bhca::SystemConfig config = bhca::resolve_config(m);
            std::vector<std::uint64_t> seeds(seed_count);
            std::iota(seeds.begin(), seeds.end(), first_seed);
            const auto rows = bhca::run_batch(config, seeds, batch_flags.options(), parallel);
            std::ofstream(batch_out) << bhca::batch_to_csv(rows);
            std::cout << "wrote " << rows.size() << " rows to " << batch_out << '\n';
            return bhca::kExitOk;
        }
    } catch (const bhca::ConfigError& e) {
        std::cerr << "config error (" << e.field() << "): " << e.what() << '\n';
        return bhca::kExitConfigError;
    } catch (const bhca::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return bhca::kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return bhca::kExitRuntimeError;
    }
    return bhca::kExitOk;
}
