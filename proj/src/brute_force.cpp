#include <chrono>
#include <cmath>
#include <memory>

#include "bhca/branch_bound.hpp"
#include "bhca/errors.hpp"

namespace bhca {

MilpSolution brute_force(const LinearProgram& program, const LpOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    const std::vector<int> binaries = program.binary_columns();
    const int nb = static_cast<int>(binaries.size());
    if (nb > kBruteForceMaxBinaries) {
        throw SolverError("brute force refuses " + std::to_string(nb) + " binaries (limit " +
                          std::to_string(kBruteForceMaxBinaries) + ")");
    }

    std::vector<int> slot_of(program.num_columns(), -1);
    for (int k = 0; k < nb; ++k) slot_of[binaries[k]] = k;

    // Rows over binaries only (C1, C3, C6 in the BH-CA model) are checked before any LP.
    std::vector<const LinearConstraint*> binary_rows;
    for (const auto& row : program.rows) {
        bool only_binaries = !row.terms.empty();
        for (const auto& t : row.terms) only_binaries = only_binaries && slot_of[t.column] >= 0;
        if (only_binaries) binary_rows.push_back(&row);
    }

    auto compiled = std::make_shared<const CompiledLp>(program);
    SimplexEngine engine(compiled, options);

    MilpSolution best;
    best.status = MilpStatus::infeasible;
    bool found = false;
    std::vector<double> trial(program.num_columns(), 0.0);
    std::vector<Fixing> fixings(nb);
    SimplexEngine::Basis warm;
    bool have_warm = false;

    const std::uint64_t count = std::uint64_t{1} << nb;
    for (std::uint64_t i = 0; i < count; ++i) {
        const std::uint64_t code = i ^ (i >> 1);  // Gray order keeps consecutive LPs one flip apart
        bool admissible = true;
        for (int k = 0; k < nb && admissible; ++k) {
            const double v = double((code >> k) & 1U);
            const auto& col = program.columns[binaries[k]];
            admissible = v >= col.lower - 1e-9 && v <= col.upper + 1e-9;
            trial[binaries[k]] = v;
            fixings[k] = {binaries[k], v, v};
        }
        for (const auto* row : binary_rows) {
            if (!admissible) break;
            admissible = row_violation(*row, trial) <= 1e-9;
        }
        if (!admissible) continue;

        LpSolution lp = engine.solve(fixings, have_warm ? &warm : nullptr);
        warm = engine.basis();
        have_warm = true;
        ++best.nodes_explored;
        best.lp_iterations += lp.iterations;
        if (lp.status != LpStatus::optimal) continue;
        if (!found || lp.objective > best.objective + 1e-12 * std::max(1.0, std::abs(best.objective))) {
            found = true;
            best.objective = lp.objective;
            best.values = lp.values;
        }
    }

    if (found) {
        best.status = MilpStatus::optimal;
        best.best_bound = best.objective;
    }
    best.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return best;
}

MilpSolution brute_force(const ModelInstance& model, const LpOptions& options) {
    return brute_force(model.program, options);
}

}  // namespace bhca
