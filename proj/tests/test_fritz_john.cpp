#include <doctest.h>

#include <cmath>

#include "hnpf/errors.hpp"
#include "hnpf/fritz_john.hpp"
#include "hnpf/rng.hpp"

using namespace hnpf;

namespace {

const double a = 1.0 / std::sqrt(2.0);

// Case I has square L = [A B; 0 diag(g)], so det(LᵀL) = (det A · g1 · g2)².
double case_one_oracle(double x1, double x2)
{
    auto grad = [&](double c) {
        const double e = std::exp(-((x1 - c) * (x1 - c) + (x2 - c) * (x2 - c)));
        return std::pair{2.0 * (x1 - c) * e, 2.0 * (x2 - c) * e};
    };
    const auto [p1, p2] = grad(a);
    const auto [q1, q2] = grad(-a);
    const double det_a = p1 * q2 - p2 * q1;
    const double g1 = x1 * x1 - 0.5;
    const double g2 = x2 * x2 - 0.5;
    const double d = det_a * g1 * g2;
    return d * d;
}

} // namespace

TEST_CASE("L has the block layout")
{
    const MooProblem one = builtin_case("I");
    const Matrix l = build_L(one, Vector{0.0, 0.0});
    REQUIRE(l.rows() == 4);
    REQUIRE(l.cols() == 4);
    CHECK(l(2, 0) == 0.0);
    CHECK(l(2, 1) == 0.0);
    CHECK(l(3, 0) == 0.0);
    CHECK(l(3, 1) == 0.0);
    CHECK(l(2, 2) == doctest::Approx(-0.5));
    CHECK(l(3, 3) == doctest::Approx(-0.5));
    CHECK(l(2, 3) == 0.0);
    CHECK(l(3, 2) == 0.0);

    const MooProblem two = builtin_case("II");
    const Matrix l2 = build_L(two, Vector{0.3, 0.5});
    CHECK(l2(0, 0) == 1.0);
    CHECK(l2(1, 0) == 0.0);
    CHECK(l2(1, 1) == doctest::Approx(1.0));

    // On a face the g entry is exactly zero.
    const Matrix face = build_L(two, Vector{1.0, 0.5});
    CHECK(face(2, 2) == 0.0);

    const MooProblem five = builtin_case("V");
    const Matrix l5 = build_L(five, Vector(30, 0.5));
    CHECK(l5.rows() == 60);
    CHECK(l5.cols() == 32);
}

TEST_CASE("discriminant matches the block-determinant oracle on Case I")
{
    const MooProblem one = builtin_case("I");
    Rng rng(5);
    for (int i = 0; i < 500; ++i) {
        const double x1 = rng.uniform(-a, a);
        const double x2 = rng.uniform(-a, a);
        const double expected = case_one_oracle(x1, x2);
        const double got = discriminant(one, Vector{x1, x2});
        CHECK(std::abs(got - expected) <= 1e-8 * expected + 1e-14);
    }
}

TEST_CASE("zeros on the front, positive off it")
{
    const MooProblem one = builtin_case("I");
    const std::vector<Vector> xs{{0.2, 0.2}, {0.5, -0.5}, {-0.3, 0.4}, {0.1, 0.1}};
    const auto labels = label_batch(one, xs);
    CHECK(labels[0].normalized <= 1e-9);
    CHECK(labels[3].normalized <= 1e-9);
    CHECK(labels[1].normalized > 0.001);
    CHECK(labels[0].label_pareto == doctest::Approx(1.0));
    for (const auto &l : labels) {
        CHECK(l.raw >= 0.0);
        CHECK(l.normalized >= 0.0);
        CHECK(l.normalized <= 1.0);
        CHECK(l.label_pareto + l.label_nonpareto == doctest::Approx(1.0));
    }
    CHECK(std::max({labels[0].normalized, labels[1].normalized, labels[2].normalized,
                    labels[3].normalized}) == 1.0);
}

TEST_CASE("a zero gradient column makes D vanish")
{
    MooProblem p = builtin_case("II");
    p.objectives[0].gradient = [](std::span<const double>) { return Gradient{Vector(2, 0.0), false}; };
    CHECK(discriminant(p, Vector{0.3, 0.5}) == 0.0);
}

TEST_CASE("rescaling an objective keeps the zero set")
{
    const MooProblem one = builtin_case("I");
    MooProblem scaled = one;
    const auto f = one.objectives[0];
    scaled.objectives[0].value = [f](std::span<const double> x) { return 7.0 * f.value(x); };
    scaled.objectives[0].gradient = [f](std::span<const double> x) {
        Gradient g = f.gradient(x);
        for (double &v : g.values) v *= 7.0;
        return g;
    };
    Rng rng(9);
    std::vector<Vector> xs;
    for (int i = 0; i < 200; ++i) {
        xs.push_back({rng.uniform(-a, a), rng.uniform(-a, a)});
    }
    xs.push_back({0.3, 0.3});
    const auto base = label_batch(one, xs);
    const auto other = label_batch(scaled, xs);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        CHECK(std::abs(other[i].raw - 49.0 * base[i].raw) <= 1e-8 * base[i].raw + 1e-14);
        CHECK(other[i].normalized == doctest::Approx(base[i].normalized).epsilon(1e-9));
    }
    CHECK(base.back().normalized <= 1e-9);
}

TEST_CASE("batch edge cases")
{
    const MooProblem two = builtin_case("II");
    CHECK_THROWS_AS(label_batch(two, {}), InputError);

    const auto same = label_batch(two, {Vector{0.3, 0.5}, Vector{0.3, 0.5}});
    CHECK(same[0].normalized == 1.0);
    CHECK(same[1].normalized == 1.0);

    const auto pair = label_batch(two, {Vector{0.3, 0.0}, Vector{0.3, 0.5}});
    CHECK(pair[0].normalized == doctest::Approx(0.0).scale(1.0));
    CHECK(pair[1].normalized == 1.0);

    // Every raw value zero: the whole batch is labelled Pareto.
    const auto zeros = label_batch(two, {Vector{0.3, 0.0}, Vector{0.7, 0.0}});
    CHECK(zeros[0].label_pareto == 1.0);
    CHECK(zeros[1].label_pareto == 1.0);

    CHECK_THROWS_AS(discriminant(two, Vector{0.3}), InputError);
}

TEST_CASE("infeasible points are labelled non-Pareto and excluded from the maximum")
{
    const MooProblem three = builtin_case("III");
    const std::vector<Vector> xs{{0.1, 0.1}, {0.9, 0.6}, {0.2, 1.0}};
    const auto labels = label_batch(three, xs);
    CHECK_FALSE(labels[0].feasible);
    CHECK(labels[0].normalized == 1.0);
    CHECK(labels[0].label_pareto == 0.0);
    const auto samples = label_samples(three, xs);
    REQUIRE(samples.size() == 3);
    CHECK(samples[1].x == xs[1]);
    CHECK(samples[1].label.normalized == labels[1].normalized);
}
