#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hnpf/linalg.hpp"

namespace hnpf {

/// A candidate point carried through extraction and filtering.
/// `fx` is in canonical (minimization) form.
struct FrontPoint {
    std::size_t source = 0;  ///< index into the originating point list
    Vector x;
    Vector fx;
    double p_pareto = 1.0;
};

struct WeakParetoSet {
    std::vector<FrontPoint> points;
    /// Non-empty when extraction returned nothing.
    std::string warning;
};

struct StrongParetoSet {
    std::vector<FrontPoint> points;
    /// Positions of the survivors in the filter's input, ascending.
    std::vector<std::size_t> kept;
    /// Per objective: true when h covered the whole range (one slab).
    std::vector<bool> single_slab;
    /// Slab-membership tests performed by the sweep (the O(kzn) loop).
    std::size_t scan_iterations = 0;
};

} // namespace hnpf
