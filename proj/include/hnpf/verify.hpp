#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "hnpf/front.hpp"
#include "hnpf/linalg.hpp"
#include "hnpf/problems.hpp"

namespace hnpf {

struct DensityReport {
    std::string case_name;
    std::size_t points = 0;
    std::size_t evaluations = 0;
    double percent = 0.0;  ///< 100 · points / evaluations
};

/// Throws InputError when points > evaluations or evaluations == 0 with points > 0.
DensityReport density(std::size_t points, std::size_t evaluations, std::string case_name = {});

enum class ErrorMode {
    max_distance,  ///< pass iff every distance <= tolerance
    quantile       ///< pass iff at least `quantile` of the points are within tolerance
};

struct FrontErrorReport {
    std::vector<double> distances;
    double fraction_within = 0.0;
    double max_distance = 0.0;
    double tolerance = 0.05;
    ErrorMode mode = ErrorMode::quantile;
    double quantile = 0.95;
    bool pass = false;
};

inline constexpr double kGeometricTolerance = 0.05;
inline constexpr double kFrontQuantile = 0.95;

/// Distance of each point to the problem's analytic efficient set. An empty
/// point list yields fraction 0 and fails. Throws UnsupportedError when the
/// problem has no analytic front.
FrontErrorReport front_error(const std::vector<FrontPoint> &points, const MooProblem &problem,
                             double tolerance = kGeometricTolerance,
                             ErrorMode mode = ErrorMode::quantile, double quantile = kFrontQuantile);

struct Certificate {
    double raw = 0.0;
    double normalized = 0.0;
    bool feasible = true;
    bool pass = false;
};

/// Discriminant of each candidate normalized over the candidate batch;
/// pass iff feasible and normalized <= epsilon.
std::vector<Certificate> certify_points(const MooProblem &problem, const std::vector<Vector> &xs,
                                        double epsilon = 0.001);

nlohmann::ordered_json to_json(const DensityReport &report);
/// Summary only; per-point distances are omitted.
nlohmann::ordered_json to_json(const FrontErrorReport &report);

std::string to_text(const DensityReport &report);
std::string to_text(const FrontErrorReport &report);

} // namespace hnpf
