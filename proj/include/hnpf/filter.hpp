#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "hnpf/front.hpp"
#include "hnpf/linalg.hpp"

namespace hnpf {

enum class SweepMode {
    /// Sort the active set by slab and visit only occupied slabs.
    bucketed,
    /// Step through every level and test every active point for membership.
    level_scan
};

/// Objective bounds and slab widths for the plane filter. All objectives are
/// minimized; maximized objectives must be negated by the caller.
struct FilterConfig {
    Vector f_min;
    Vector f_max;
    Vector h;
    SweepMode mode = SweepMode::bucketed;

    std::size_t k() const noexcept { return h.size(); }
    /// Number of slabs for objective i: ceil(range / h), at least one.
    std::size_t slabs(std::size_t i) const;
    void validate() const;

    /// Bounds from the points themselves and h = range / levels per objective.
    static FilterConfig from_points(const std::vector<FrontPoint> &points, std::size_t levels = 200);
};

/// Plane-search filter. For each objective i the active set is swept in slabs
/// of width h from f_min. A point in a slab is dropped when a point that
/// started the sweep in a lower slab dominates it; of what remains in the slab
/// only the lexicographic minimum of (f_q, f_i, other objectives, input
/// position) with q = (i + 1) mod k is kept.
StrongParetoSet plane_filter(const std::vector<FrontPoint> &points, const FilterConfig &config);
StrongParetoSet plane_filter(const WeakParetoSet &weak, const FilterConfig &config);

/// All-pairs non-dominance: keeps every point that no other point dominates.
StrongParetoSet oracle_filter(const std::vector<FrontPoint> &points);
StrongParetoSet oracle_filter(const WeakParetoSet &weak);

/// True when a is no worse than b everywhere and strictly better somewhere.
bool dominates(const Vector &a, const Vector &b);

/// Runs the level-scan sweep on n mutually non-dominated points with k
/// objectives and z slabs and returns the membership tests performed.
/// With 2n <= z every point sits in its own slab and the count is k·z·n.
std::size_t filter_complexity_probe(std::size_t n_points, std::size_t k, std::size_t z);

/// Point set read from CSV with columns [index,] x_1..x_n, f_1..f_k [, survived].
struct PointTable {
    std::vector<FrontPoint> points;
    std::size_t n = 0;
    std::size_t k = 0;
};

/// `k` = 0 infers the objective count from the f_* columns. Throws InputError
/// naming the offending line.
PointTable read_point_table(std::istream &in, std::size_t k = 0);

/// One row per input point: index, x_*, f_*, survived (0/1).
void write_filter_csv(std::ostream &out, const std::vector<FrontPoint> &points,
                      const StrongParetoSet &result);

/// Header index, x_*, f_*, p_pareto; one row per point.
void write_front_csv(std::ostream &out, const std::vector<FrontPoint> &points);

} // namespace hnpf
