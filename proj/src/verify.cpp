#include "hnpf/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "hnpf/errors.hpp"
#include "hnpf/fritz_john.hpp"

namespace hnpf {

namespace {

std::string fixed(double v, int digits)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

} // namespace

DensityReport density(std::size_t points, std::size_t evaluations, std::string case_name)
{
    if (points > evaluations) {
        throw InputError("density: more extracted points than function evaluations");
    }
    DensityReport r{std::move(case_name), points, evaluations, 0.0};
    if (evaluations > 0) {
        r.percent = 100.0 * static_cast<double>(points) / static_cast<double>(evaluations);
    }
    return r;
}

FrontErrorReport front_error(const std::vector<FrontPoint> &points, const MooProblem &problem,
                             double tolerance, ErrorMode mode, double quantile)
{
    if (!problem.has_front()) {
        throw UnsupportedError("problem '" + problem.name + "' has no analytic front");
    }
    if (!(tolerance >= 0.0) || !(quantile > 0.0 && quantile <= 1.0)) {
        throw InputError("front_error: need tolerance >= 0 and quantile in (0, 1]");
    }
    FrontErrorReport r;
    r.tolerance = tolerance;
    r.mode = mode;
    r.quantile = quantile;
    std::size_t within = 0;
    for (const auto &p : points) {
        if (p.x.size() != problem.n()) {
            throw InputError("front_error: point dimension does not match the problem");
        }
        const double d = problem.front_distance(p.x);
        r.distances.push_back(d);
        r.max_distance = std::max(r.max_distance, d);
        within += d <= tolerance ? 1 : 0;
    }
    if (points.empty()) {
        return r;
    }
    r.fraction_within = static_cast<double>(within) / static_cast<double>(points.size());
    r.pass = mode == ErrorMode::max_distance ? r.max_distance <= tolerance
                                              : r.fraction_within >= quantile;
    return r;
}

std::vector<Certificate> certify_points(const MooProblem &problem, const std::vector<Vector> &xs,
                                        double epsilon)
{
    if (xs.empty()) {
        throw InputError("certify_points: empty candidate list");
    }
    std::vector<Certificate> out;
    for (const auto &d : label_batch(problem, xs)) {
        out.push_back({d.raw, d.normalized, d.feasible, d.feasible && d.normalized <= epsilon});
    }
    return out;
}

nlohmann::ordered_json to_json(const DensityReport &report)
{
    return {{"case", report.case_name},
            {"points", report.points},
            {"evaluations", report.evaluations},
            {"density_percent", report.percent}};
}

nlohmann::ordered_json to_json(const FrontErrorReport &report)
{
    return {{"points", report.distances.size()},
            {"tolerance", report.tolerance},
            {"mode", report.mode == ErrorMode::quantile ? "quantile" : "max_distance"},
            {"quantile", report.quantile},
            {"fraction_within", report.fraction_within},
            {"max_distance", report.max_distance},
            {"pass", report.pass}};
}

std::string to_text(const DensityReport &report)
{
    return report.case_name + ": density " + fixed(report.percent, 2) + "% (" +
           std::to_string(report.points) + " points / " + std::to_string(report.evaluations) +
           " evaluations)";
}

std::string to_text(const FrontErrorReport &report)
{
    return "front error: " + fixed(100.0 * report.fraction_within, 1) + "% of " +
           std::to_string(report.distances.size()) + " points within " +
           fixed(report.tolerance, 3) + ", max distance " + fixed(report.max_distance, 4) +
           (report.pass ? " [pass]" : " [fail]");
}

} // namespace hnpf
