#pragma once

#include <limits>
#include <string>
#include <vector>

namespace bhca {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { less_equal, greater_equal, equal };

struct Term {
    int column = 0;
    double coef = 0;

    bool operator==(const Term&) const = default;
};

/**
 * One row `sum(terms) <sense> rhs`. Terms are sorted by column with no
 * duplicates and no zero coefficients. `tag` is the constraint family
 * ("C1" .. "C9", with a sub-label such as "C9-d"); `name` is unique per row.
 */
struct LinearConstraint {
    std::vector<Term> terms;
    Sense sense = Sense::less_equal;
    double rhs = 0;
    std::string tag;
    std::string name;

    bool operator==(const LinearConstraint&) const = default;
};

struct Column {
    std::string name;
    double lower = 0;
    double upper = kInf;
    bool binary = false;

    bool operator==(const Column&) const = default;
};

/// A maximization MILP: columns with bounds and integrality, rows, and a sparse objective.
struct LinearProgram {
    std::vector<Column> columns;
    std::vector<LinearConstraint> rows;
    std::vector<Term> objective;

    int num_columns() const { return static_cast<int>(columns.size()); }
    int num_rows() const { return static_cast<int>(rows.size()); }

    int add_column(std::string name, double lower, double upper, bool binary = false);
    /// Merges duplicate columns, drops zero coefficients and sorts the terms before storing.
    void add_row(std::vector<Term> terms, Sense sense, double rhs, std::string tag, std::string name);

    std::vector<int> binary_columns() const;
    double objective_value(const std::vector<double>& values) const;
};

/// Canonical form of a term list: sorted by column, duplicates summed, zeros removed.
std::vector<Term> normalize_terms(std::vector<Term> terms);

double row_activity(const LinearConstraint& row, const std::vector<double>& values);
/// Amount by which `values` violates `row` (0 when satisfied).
double row_violation(const LinearConstraint& row, const std::vector<double>& values);

}  // namespace bhca
