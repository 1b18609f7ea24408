#pragma once

#include <string>
#include <vector>

#include "bhca/linear_program.hpp"
#include "bhca/link_budget.hpp"
#include "bhca/scenario.hpp"

namespace bhca {

/**
 * Flat column ids for the BH-CA variables. Families are laid out in the
 * order a, beta, z, q, t_U, t_L, theta; inside a family the index tuple is
 * lexicographic. a and beta share the (l, c, u) index space, q extends it
 * with the slot index t. c and u are local to cluster l.
 */
class VariableCatalog {
public:
    VariableCatalog() = default;
    VariableCatalog(std::vector<int> carriers_per_cluster, std::vector<int> users_per_cluster, int num_slots);

    int num_clusters() const { return static_cast<int>(carriers_.size()); }
    int num_carriers(int l) const { return carriers_[l]; }
    int num_users(int l) const { return users_[l]; }
    int num_slots() const { return slots_; }
    int num_pairs() const { return pair_total_; }
    int size() const { return theta_ + 1; }

    int a(int l, int c, int u) const { return a_base_ + pair(l, c, u); }
    int beta(int l, int c, int u) const { return beta_base_ + pair(l, c, u); }
    int z(int l, int t) const { return z_base_ + l * slots_ + t; }
    int q(int l, int c, int u, int t) const { return q_base_ + pair(l, c, u) * slots_ + t; }
    int t_upper(int l) const { return t_upper_base_ + l; }
    int t_lower() const { return t_lower_; }
    int theta() const { return theta_; }

    /// Variable name in the exported LP file, 1-based indices: a_l_c_u, z_l_t, ...
    std::string name(int column) const;

    bool operator==(const VariableCatalog&) const = default;

private:
    int pair(int l, int c, int u) const { return pair_offset_[l] + c * users_[l] + u; }

    std::vector<int> carriers_;
    std::vector<int> users_;
    std::vector<int> pair_offset_;
    int slots_ = 0;
    int pair_total_ = 0;
    int a_base_ = 0, beta_base_ = 0, z_base_ = 0, q_base_ = 0, t_upper_base_ = 0, t_lower_ = 0, theta_ = 0;
};

struct ModelParams {
    double epsilon_tiebreak = 1e-4;  // weight of sum(t_U) + t_L in the objective
    double epsilon_fill = 1e-6;      // activation floor of beta when a = 1
    double big_m = 1.0;
};

/// The scalarized single-objective BH-CA MILP together with the index map that produced it.
struct ModelInstance {
    VariableCatalog catalog;
    LinearProgram program;
    ModelParams params;
    int delta_max = 0;
    int max_active_clusters = 0;
    std::vector<ClusterPair> pairs;
};

/**
 * Builds constraints C1..C9 and the objective theta + eps_obj * (sum_l t_U(l) + t_L).
 * Supply rows C4/C5 are divided by the demand they compare against, so their
 * coefficients are rate-to-demand ratios and t_U, t_L, theta are dimensionless.
 */
ModelInstance build_model(const Scenario& scenario, const RateTable& rates, const std::vector<ClusterPair>& pairs,
                          const ModelParams& params = {});

struct Violation {
    enum class Kind { row, bound, integrality };
    Kind kind = Kind::row;
    int index = 0;  // row index for Kind::row, column index otherwise
    std::string name;
    double amount = 0;
};

struct ViolationReport {
    std::vector<Violation> violations;

    bool feasible() const { return violations.empty(); }
    std::string summary(std::size_t max_lines = 10) const;
};

inline constexpr double kValidationTol = 1e-6;

/// Every row, bound and integrality violation above `tol`. Throws StructuralError on a size mismatch.
ViolationReport validate_solution(const LinearProgram& program, const std::vector<double>& values,
                                  double tol = kValidationTol);
ViolationReport validate_solution(const ModelInstance& model, const std::vector<double>& values,
                                  double tol = kValidationTol);

}  // namespace bhca
