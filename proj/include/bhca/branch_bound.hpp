#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bhca/linear_program.hpp"
#include "bhca/model.hpp"
#include "bhca/simplex.hpp"

namespace bhca {

enum class BranchRule { most_fractional, lowest_index };
enum class NodeOrder { best_bound, depth_first };

struct SolverOptions {
    double integrality_tol = 1e-6;
    double feas_tol = 1e-9;
    long node_limit = 1'000'000;
    double time_limit = 3600.0;  // seconds
    BranchRule branch_rule = BranchRule::most_fractional;
    NodeOrder node_order = NodeOrder::best_bound;
    int worker_count = 1;
    long log_interval = 1000;  // nodes between periodic log lines
    /// Optional starting assignment. Its binaries are rounded and pinned, the rest is re-solved;
    /// a feasible result becomes the first incumbent.
    std::vector<double> start;
    /// Receives each log line as it is produced (the lines are also kept in the solution).
    std::function<void(const std::string&)> log_sink;

    /// Throws ConfigError when a tolerance is outside (0, 1e-3] or a limit is < 1.
    void validate() const;
};

enum class MilpStatus { optimal, feasible, infeasible, no_solution };

const char* to_string(MilpStatus status);
const char* to_string(BranchRule rule);
const char* to_string(NodeOrder order);
BranchRule branch_rule_from(const std::string& s);
NodeOrder node_order_from(const std::string& s);

struct MilpSolution {
    MilpStatus status = MilpStatus::infeasible;
    std::vector<double> values;
    double objective = 0;
    double best_bound = 0;
    double gap = 0;  // relative: (best_bound - objective) / max(|objective|, 1e-9)
    long nodes_explored = 0;
    long lp_iterations = 0;
    double wall_time = 0;
    double root_bound = 0;
    std::vector<double> incumbent_history;
    /// `node=<n> bound=<b> incumbent=<i> gap=<g>`; deterministic for a fixed worker count.
    std::vector<std::string> log;

    bool has_solution() const { return status == MilpStatus::optimal || status == MilpStatus::feasible; }
};

/**
 * LP-based branch-and-bound over the binary columns. Every incumbent is the
 * LP optimum with all binaries fixed to their rounded values, so returned
 * binaries are exactly 0 or 1. Node/time limits end the search with status
 * `feasible` (or `no_solution`) and a reported gap.
 */
MilpSolution solve_milp(const LinearProgram& program, const SolverOptions& options = {});
MilpSolution solve_milp(const ModelInstance& model, const SolverOptions& options = {});

inline constexpr int kBruteForceMaxBinaries = 24;

/**
 * Exhaustive oracle: enumerates every 0/1 assignment of the binaries that
 * passes the rows made only of binaries, solves the remaining LP for each,
 * and keeps the best. Refuses programs with more than 24 binaries.
 */
MilpSolution brute_force(const LinearProgram& program, const LpOptions& options = {});
MilpSolution brute_force(const ModelInstance& model, const LpOptions& options = {});

}  // namespace bhca
