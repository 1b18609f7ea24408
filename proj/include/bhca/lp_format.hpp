#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "bhca/linear_program.hpp"
#include "bhca/model.hpp"

namespace bhca {

/**
 * CPLEX LP text: Maximize / Subject To / Bounds / Binaries / End. Numbers
 * use %.17g so they survive a round trip. Columns at the format defaults
 * ([0, inf), or [0, 1] for binaries) get no bound line.
 */
std::string export_lp(const LinearProgram& program);
std::string export_lp(const ModelInstance& model);

/**
 * Reads the subset of CPLEX LP written by export_lp (also accepts Minimize,
 * "st"/"s.t.", "Binary"/"Bin", comments after '\'). Columns appear in order
 * of first mention. Row tags are rebuilt from the row name ("C9d_1_1_1_1" -> "C9-d").
 * Throws ParseError with the offending line.
 */
LinearProgram parse_lp(std::string_view text);

/**
 * Reorders the columns of `parsed` to follow `names` and remaps every row
 * and the objective. Throws StructuralError when the name sets differ.
 */
LinearProgram rebuild_program(const LinearProgram& parsed, const std::vector<std::string>& names);

/// Row family recovered from a row name.
std::string tag_from_name(std::string_view name);

}  // namespace bhca
