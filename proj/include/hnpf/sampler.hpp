#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "hnpf/linalg.hpp"
#include "hnpf/problems.hpp"

namespace hnpf {

enum class Distribution { uniform, binomial };

/// How many points to draw and from what. Binomial draws are lo_i + B(trials, p_i)
/// per variable; trials/p default to the problem's binomial parameters when left empty.
struct SamplePlan {
    std::size_t n_train = 11000;
    double split = 0.9;
    std::size_t n_infer = 90000;
    std::uint64_t seed = 0;
    Distribution distribution = Distribution::uniform;
    int binomial_trials = 0;
    Vector binomial_p;

    void validate() const;
};

struct SampleSplit {
    std::vector<Vector> train;
    std::vector<Vector> validation;
};

/// n_train i.i.d. points, shuffled, then the first round(split·n_train) become
/// the training set. Deterministic in plan.seed.
SampleSplit sample(const MooProblem &problem, const SamplePlan &plan);

/// n_infer points from a stream independent of the training draw.
std::vector<Vector> sample_inference(const MooProblem &problem, const SamplePlan &plan);

/// Header x_1..x_n, one row per point.
void write_points_csv(std::ostream &out, const std::vector<Vector> &points, std::size_t n);

} // namespace hnpf
