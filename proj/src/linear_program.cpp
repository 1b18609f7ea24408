#include "bhca/linear_program.hpp"

#include <algorithm>
#include <cmath>

namespace bhca {

std::vector<Term> normalize_terms(std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.column < b.column; });
    std::vector<Term> out;
    out.reserve(terms.size());
    for (const auto& t : terms) {
        if (!out.empty() && out.back().column == t.column) {
            out.back().coef += t.coef;
        } else {
            out.push_back(t);
        }
    }
    std::erase_if(out, [](const Term& t) { return t.coef == 0.0; });
    return out;
}

int LinearProgram::add_column(std::string name, double lower, double upper, bool binary) {
    columns.push_back({std::move(name), lower, upper, binary});
    return num_columns() - 1;
}

void LinearProgram::add_row(std::vector<Term> terms, Sense sense, double rhs, std::string tag, std::string name) {
    rows.push_back({normalize_terms(std::move(terms)), sense, rhs, std::move(tag), std::move(name)});
}

std::vector<int> LinearProgram::binary_columns() const {
    std::vector<int> out;
    for (int j = 0; j < num_columns(); ++j)
        if (columns[j].binary) out.push_back(j);
    return out;
}

double LinearProgram::objective_value(const std::vector<double>& values) const {
    double v = 0;
    for (const auto& t : objective) v += t.coef * values[t.column];
    return v;
}

double row_activity(const LinearConstraint& row, const std::vector<double>& values) {
    double a = 0;
    for (const auto& t : row.terms) a += t.coef * values[t.column];
    return a;
}

double row_violation(const LinearConstraint& row, const std::vector<double>& values) {
    const double a = row_activity(row, values);
    switch (row.sense) {
        case Sense::less_equal: return std::max(0.0, a - row.rhs);
        case Sense::greater_equal: return std::max(0.0, row.rhs - a);
        case Sense::equal: return std::abs(a - row.rhs);
    }
    return 0;
}

}  // namespace bhca
