#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "bhca/linear_program.hpp"

namespace bhca {

struct LpOptions {
    double feas_tol = 1e-9;
    double opt_tol = 1e-9;
    double pivot_tol = 1e-9;
    int degenerate_trigger = 50;  // consecutive degenerate pivots before switching to Bland's rule
    int refactor_interval = 100;
    long max_iterations = 0;  // 0: derived from the problem size
};

enum class LpStatus { optimal, infeasible, unbounded };

const char* to_string(LpStatus status);

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    std::vector<double> values;  // one per structural column
    double objective = 0;        // in the program's maximization sense
    long iterations = 0;
    int bland_activations = 0;
};

/// Interval restriction on a column, intersected with the column's own bounds.
struct Fixing {
    int column = 0;
    double lower = 0;
    double upper = 0;
};

/**
 * Simplex-ready form of a LinearProgram: rows scaled by their largest
 * coefficient, single-variable rows folded into column bounds, stored
 * column-wise. Immutable and shareable between engines.
 */
class CompiledLp {
public:
    explicit CompiledLp(const LinearProgram& program);

    int num_columns() const { return n_; }
    int num_rows() const { return m_; }
    bool trivially_infeasible() const { return trivially_infeasible_; }

private:
    friend class SimplexEngine;

    int n_ = 0;
    int m_ = 0;
    bool trivially_infeasible_ = false;
    std::vector<double> lower_, upper_;  // structural bounds after folding singleton rows
    std::vector<double> cost_;           // minimization costs (negated objective)
    std::vector<double> obj_;            // original objective coefficients
    std::vector<int> col_start_, row_index_;
    std::vector<double> value_;
    std::vector<double> row_lower_, row_upper_;  // scaled
};

/**
 * Two-phase bounded primal simplex over a CompiledLp. One engine per
 * thread; the engine keeps its last basis so a following solve with
 * tightened bounds can start from it. A warm basis that is still dual
 * feasible is first repaired with dual simplex pivots.
 */
class SimplexEngine {
public:
    struct Basis {
        std::vector<int> head;            // basic variable per row
        std::vector<std::uint8_t> state;  // per variable (structural, then row activities)
    };

    SimplexEngine(std::shared_ptr<const CompiledLp> lp, LpOptions options = {});

    LpSolution solve(std::span<const Fixing> fixings = {}, const Basis* warm_start = nullptr);

    const Basis& basis() const { return basis_; }

private:
    enum State : std::uint8_t { basic = 0, at_lower = 1, at_upper = 2, free_zero = 3 };

    struct Eta {
        int row;
        double pivot;
        std::vector<int> index;
        std::vector<double> value;
    };

    bool install_basis(const Basis* warm);
    void slack_basis();
    void place_nonbasic(int j);
    bool refactor();
    void recompute_basics();
    void ftran(Eigen::VectorXd& v) const;
    void btran(Eigen::VectorXd& v) const;
    void load_column(int j, Eigen::VectorXd& v) const;
    double column_dot(int j, const Eigen::VectorXd& y) const;
    double infeasibility() const;

    enum class PhaseResult { done, infeasible, unbounded, skipped };
    PhaseResult run_phase(int phase, LpSolution& out);
    /// Dual simplex from a dual feasible basis; `skipped` when the basis is not dual feasible or it stalls.
    PhaseResult run_dual();

    std::shared_ptr<const CompiledLp> lp_;
    LpOptions opt_;
    int n_ = 0, m_ = 0, total_ = 0;
    std::vector<double> lb_, ub_, x_;
    std::vector<int> head_, pos_;
    std::vector<std::uint8_t> state_;
    mutable Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;  // transpose() is non-const
    std::vector<Eta> etas_;
    bool factored_ = false;
    Basis basis_;
    long iterations_ = 0;
    long max_iterations_ = 0;
};

/// One-shot LP solve of the continuous relaxation with optional column restrictions.
LpSolution solve_lp(const LinearProgram& program, std::span<const Fixing> fixings = {}, const LpOptions& options = {});

}  // namespace bhca
