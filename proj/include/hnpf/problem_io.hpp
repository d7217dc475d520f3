#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "hnpf/problems.hpp"

namespace hnpf {

/// Builds a problem from a JSON description:
///
///   {
///     "name": "my-case",
///     "bounds": [[0, 1], [-2, 2]],
///     "objectives": ["x1", {"expr": "1 + x2^2 - x1", "grad": ["-1", "2*x2"],
///                           "sense": "minimize"}],
///     "constraints": [{"expr": "x1 + x2 - 2"}],
///     "box_constraints": true,        // one (x-lo)(x-hi) <= 0 per bound, default true
///     "finite_differences": false,    // allow entries without "grad"
///     "integral": [false, false],     // optional
///     "n": 2, "k": 2, "m": 3          // optional consistency checks
///   }
///
/// Constraints are in g(x) <= 0 form. Objectives with sense "maximize" are
/// stored negated. Throws InputError on any schema or expression problem.
MooProblem problem_from_json(const nlohmann::json &desc);

MooProblem load_problem_file(const std::filesystem::path &path);

} // namespace hnpf
