#include "hnpf/sampler.hpp"

#include <cmath>
#include <ostream>

#include "hnpf/csv.hpp"
#include "hnpf/errors.hpp"
#include "hnpf/rng.hpp"

namespace hnpf {

namespace {

constexpr std::uint64_t kTrainStream = 1;
constexpr std::uint64_t kInferStream = 2;

struct Binomial {
    int trials;
    Vector p;
};

Binomial binomial_parameters(const MooProblem &problem, const SamplePlan &plan)
{
    Binomial b{plan.binomial_trials > 0 ? plan.binomial_trials : problem.binomial_trials,
               plan.binomial_p.empty() ? problem.binomial_p : plan.binomial_p};
    if (b.trials <= 0 || b.p.size() != problem.n()) {
        throw InputError("binomial sampling needs trials > 0 and one probability per variable");
    }
    for (std::size_t i = 0; i < problem.n(); ++i) {
        if (!(b.p[i] >= 0.0 && b.p[i] <= 1.0)) {
            throw InputError("binomial probability out of [0, 1]");
        }
        if (problem.bounds[i].lo + b.trials > problem.bounds[i].hi) {
            throw InputError("binomial trials exceed the width of bound " + std::to_string(i + 1));
        }
    }
    return b;
}

std::vector<Vector> draw(const MooProblem &problem, const SamplePlan &plan, std::size_t count,
                         Rng &rng)
{
    const std::size_t n = problem.n();
    std::vector<Vector> points(count, Vector(n));
    if (plan.distribution == Distribution::binomial) {
        const Binomial b = binomial_parameters(problem, plan);
        for (auto &x : points) {
            for (std::size_t i = 0; i < n; ++i) {
                x[i] = problem.bounds[i].lo + rng.binomial(b.trials, b.p[i]);
            }
        }
        return points;
    }
    for (auto &x : points) {
        for (std::size_t i = 0; i < n; ++i) {
            const Interval &box = problem.bounds[i];
            if (problem.integral[i]) {
                const double lo = std::ceil(box.lo);
                const auto width = static_cast<std::uint64_t>(std::floor(box.hi) - lo) + 1;
                x[i] = lo + static_cast<double>(rng.below(width));
            } else {
                // [lo, hi) from uniform(); hi itself is reachable only at measure zero.
                x[i] = rng.uniform(box.lo, box.hi);
            }
        }
    }
    return points;
}

} // namespace

void SamplePlan::validate() const
{
    if (!(split > 0.0 && split < 1.0)) {
        throw InputError("sample plan: split must lie strictly between 0 and 1");
    }
    if (n_train == 0 || n_infer == 0) {
        throw InputError("sample plan: counts must be positive");
    }
    const auto train = static_cast<std::size_t>(std::llround(split * static_cast<double>(n_train)));
    if (train == 0 || train >= n_train) {
        throw InputError("sample plan: split leaves an empty training or validation set");
    }
}

SampleSplit sample(const MooProblem &problem, const SamplePlan &plan)
{
    plan.validate();
    Rng rng(derive_seed(plan.seed, kTrainStream));
    std::vector<Vector> points = draw(problem, plan, plan.n_train, rng);
    rng.shuffle(points);
    const auto train = static_cast<std::size_t>(std::llround(plan.split * static_cast<double>(plan.n_train)));
    SampleSplit out;
    out.train.assign(std::make_move_iterator(points.begin()),
                     std::make_move_iterator(points.begin() + static_cast<long>(train)));
    out.validation.assign(std::make_move_iterator(points.begin() + static_cast<long>(train)),
                          std::make_move_iterator(points.end()));
    return out;
}

std::vector<Vector> sample_inference(const MooProblem &problem, const SamplePlan &plan)
{
    plan.validate();
    Rng rng(derive_seed(plan.seed, kInferStream));
    return draw(problem, plan, plan.n_infer, rng);
}

void write_points_csv(std::ostream &out, const std::vector<Vector> &points, std::size_t n)
{
    const auto header = csv::numbered("x_", n);
    csv::write_row(out, header);
    for (const auto &x : points) {
        csv::write_row(out, x);
    }
}

} // namespace hnpf
