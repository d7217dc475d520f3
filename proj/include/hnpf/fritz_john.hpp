#pragma once

#include <span>
#include <vector>

#include "hnpf/linalg.hpp"
#include "hnpf/problems.hpp"

namespace hnpf {

/// Fritz-John discriminant of one point together with the training labels
/// derived from it.
struct DiscriminantResult {
    double raw = 0.0;         ///< det(LᵀL) >= 0
    double normalized = 0.0;  ///< raw / batch maximum, in [0, 1]
    double label_pareto = 0.0;
    double label_nonpareto = 0.0;
    bool feasible = true;
};

struct LabeledSample {
    Vector x;
    DiscriminantResult label;
};

/// L = [∇F ∇G; 0 diag(G)], shape (n+m)×(k+m).
Matrix build_L(const MooProblem &problem, std::span<const double> x);

/// Relative to the Hadamard bound, values below this are treated as exactly zero.
inline constexpr double kDiscriminantNoise = 1e-12;

/// det(LᵀL), clamped at zero. Throws EvaluationError if it is not finite.
double discriminant(const MooProblem &problem, std::span<const double> x);

/// Discriminants for a batch, normalized by the largest raw value among the
/// feasible points. Infeasible points get normalized = 1 (label_pareto = 0).
/// When every feasible raw value is zero the whole batch is labelled Pareto.
std::vector<DiscriminantResult> label_batch(const MooProblem &problem,
                                            const std::vector<Vector> &xs);

std::vector<LabeledSample> label_samples(const MooProblem &problem, const std::vector<Vector> &xs);

} // namespace hnpf
