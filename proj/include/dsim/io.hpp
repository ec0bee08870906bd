#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "dsim/flows.hpp"

namespace dsim {

using Json = nlohmann::json;

/// {"n": 2, "re": [[...], [...]], "im": [[...], [...]]}, row-major.
Json to_json(const MatC& m);
MatC matc_from_json(const Json& j);

/// {"space": "cotangent", "variant": "su", "components": [MatC...]}; variant defaults to su.
Json to_json(const PhasePoint& p);
PhasePoint point_from_json(const Json& j);

/// {"letters": ["g", "L", "g"], "part": "Re", "coeff": 1.0, "constants": [MatC...]}.
/// "part" and "coeff" are optional (Re, 1.0); "constants" only when the word uses C0, C1, ...
Json to_json(const WordSpec& w);
WordSpec word_from_json(const Json& j);
/// A single word object or an array of words (their sum).
std::vector<WordSpec> words_from_json(const Json& j);

Json to_json(const Trajectory& tr);
Trajectory trajectory_from_json(const Json& j);

/// Scalar diagnostics of a trajectory as CSV: t,hamiltonian,structure_residual.
std::string trajectory_csv(const Trajectory& tr);

/// File helpers; parse errors and missing files raise Schema errors.
Json read_json_file(const std::string& path);
/// Parses inline JSON text, or reads a file when the text starts with '@'.
Json parse_json_arg(const std::string& text);
void write_json_file(const std::string& path, const Json& j);
/// Stable text form (sorted keys, two-space indent, trailing newline).
std::string dump(const Json& j);

}  // namespace dsim
