#include "hnpf/fritz_john.hpp"

#include <algorithm>
#include <cmath>

#include "hnpf/errors.hpp"

namespace hnpf {

Matrix build_L(const MooProblem &problem, std::span<const double> x)
{
    const std::size_t n = problem.n();
    const std::size_t k = problem.k();
    const std::size_t m = problem.m();
    const Point point = evaluate(problem, x);
    const Jacobians jac = gradients(problem, x);

    Matrix L(n + m, k + m);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t i = 0; i < k; ++i) {
            L(r, i) = jac.objectives(r, i);
        }
        for (std::size_t j = 0; j < m; ++j) {
            L(r, k + j) = jac.constraints(r, j);
        }
    }
    for (std::size_t j = 0; j < m; ++j) {
        L(n + j, k + j) = point.gx[j];
    }
    return L;
}

double discriminant(const MooProblem &problem, std::span<const double> x)
{
    const Matrix g = gram(build_L(problem, x));
    const double d = determinant(g);
    if (!std::isfinite(d)) {
        throw EvaluationError("det(LᵀL) is not finite", 0);
    }
    // Hadamard: det(LᵀL) <= product of squared column norms. Anything below a
    // tiny fraction of that bound is LU round-off on a singular L, not signal.
    double bound = 1.0;
    for (std::size_t j = 0; j < g.rows(); ++j) {
        bound *= g(j, j);
    }
    if (d <= kDiscriminantNoise * bound) {
        return 0.0;
    }
    return d;
}

std::vector<DiscriminantResult> label_batch(const MooProblem &problem, const std::vector<Vector> &xs)
{
    if (xs.empty()) {
        throw InputError("label_batch: empty batch");
    }
    std::vector<DiscriminantResult> out(xs.size());
    double largest = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const Point p = evaluate(problem, xs[i]);
        out[i].feasible = is_feasible(p.gx);
        out[i].raw = discriminant(problem, xs[i]);
        if (out[i].feasible) {
            largest = std::max(largest, out[i].raw);
        }
    }
    for (auto &r : out) {
        if (!r.feasible) {
            r.normalized = 1.0;
        } else if (largest > 0.0) {
            r.normalized = std::clamp(r.raw / largest, 0.0, 1.0);
        } else {
            r.normalized = 0.0;
        }
        r.label_pareto = 1.0 - r.normalized;
        r.label_nonpareto = r.normalized;
    }
    return out;
}

std::vector<LabeledSample> label_samples(const MooProblem &problem, const std::vector<Vector> &xs)
{
    auto labels = label_batch(problem, xs);
    std::vector<LabeledSample> out;
    out.reserve(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        out.push_back({xs[i], labels[i]});
    }
    return out;
}

} // namespace hnpf
