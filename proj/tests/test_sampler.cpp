#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "hnpf/errors.hpp"
#include "hnpf/pipeline.hpp"
#include "hnpf/rng.hpp"
#include "hnpf/sampler.hpp"

using namespace hnpf;

TEST_CASE("rng streams are reproducible and distinct")
{
    Rng a(42), b(42), c(derive_seed(42, 1));
    for (int i = 0; i < 100; ++i) {
        const auto va = a.next();
        CHECK(va == b.next());
        CHECK(va != c.next());
    }
    CHECK(derive_seed(1, 1) != derive_seed(1, 2));
    CHECK(derive_seed(1, 1) != derive_seed(2, 1));
}

TEST_CASE("rng uniform, below and binomial stay in range")
{
    Rng rng(5);
    double sum = 0.0;
    for (int i = 0; i < 20000; ++i) {
        const double u = rng.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        sum += u;
        CHECK(rng.below(7) < 7);
    }
    CHECK(sum / 20000.0 == doctest::Approx(0.5).epsilon(0.02));
    double bsum = 0.0;
    for (int i = 0; i < 5000; ++i) {
        const int k = rng.binomial(48, 0.56);
        CHECK(k >= 0);
        CHECK(k <= 48);
        bsum += k;
    }
    CHECK(bsum / 5000.0 == doctest::Approx(48 * 0.56).epsilon(0.02));
}

TEST_CASE("default plan splits 11000 into 9900 and 1100")
{
    const MooProblem p = builtin_case("I");
    const SampleSplit s = sample(p, SamplePlan{});
    CHECK(s.train.size() == 9900);
    CHECK(s.validation.size() == 1100);
    CHECK(sample_inference(p, SamplePlan{}).size() == 90000);
}

TEST_CASE("same seed gives identical points, different seed does not")
{
    const MooProblem p = builtin_case("II");
    SamplePlan plan;
    plan.n_train = 500;
    plan.n_infer = 500;
    plan.seed = 9;
    const auto a = sample(p, plan);
    const auto b = sample(p, plan);
    CHECK(a.train == b.train);
    CHECK(a.validation == b.validation);
    CHECK(sample_inference(p, plan) == sample_inference(p, plan));
    plan.seed = 10;
    CHECK(sample(p, plan).train != a.train);
}

TEST_CASE("every builtin case samples inside its box with centred means")
{
    for (const auto &p : builtin_cases()) {
        CAPTURE(p.name);
        SamplePlan plan;
        plan.seed = 1;
        const auto xs = sample_inference(p, plan);
        Vector mean(p.n(), 0.0);
        for (const auto &x : xs) {
            for (std::size_t i = 0; i < p.n(); ++i) {
                REQUIRE(x[i] >= p.bounds[i].lo);
                REQUIRE(x[i] <= p.bounds[i].hi);
                mean[i] += x[i];
            }
        }
        for (std::size_t i = 0; i < p.n(); ++i) {
            const double mid = 0.5 * (p.bounds[i].lo + p.bounds[i].hi);
            const double width = p.bounds[i].hi - p.bounds[i].lo;
            CHECK(std::abs(mean[i] / static_cast<double>(xs.size()) - mid) <= 0.02 * width);
        }
    }
}

TEST_CASE("box-derived constraints are non-positive on samples and zero on faces")
{
    for (const auto &p : builtin_cases()) {
        CAPTURE(p.name);
        SamplePlan plan;
        plan.n_infer = 2000;
        for (const auto &x : sample_inference(p, plan)) {
            const Point pt = evaluate(p, x);
            for (const auto &bb : p.box_bounds) {
                CHECK(pt.gx[bb.constraint] <= 0.0);
            }
        }
        for (const auto &bb : p.box_bounds) {
            Vector x(p.n());
            for (std::size_t i = 0; i < p.n(); ++i) {
                x[i] = 0.5 * (p.bounds[i].lo + p.bounds[i].hi);
            }
            x[bb.variable] = bb.lo;
            CHECK(std::abs(evaluate(p, x).gx[bb.constraint]) <= 1e-12);
            if (std::isfinite(bb.hi)) {
                x[bb.variable] = bb.hi;
                CHECK(std::abs(evaluate(p, x).gx[bb.constraint]) <= 1e-12);
            }
        }
    }
}

TEST_CASE("fair-search plans draw integers in [0, 48]")
{
    for (const char *name : {"fair-search-uniform", "fair-search-binomial"}) {
        CAPTURE(name);
        ResolvedCase rc = resolve_case(name);
        RunConfig cfg;
        apply_overrides(cfg, rc.overrides);
        cfg.sample.n_infer = 20000;
        const auto xs = sample_inference(rc.problem, cfg.sample);
        std::set<double> seen_r;
        double mean_r = 0.0;
        for (const auto &x : xs) {
            for (double v : x) {
                REQUIRE(v == std::floor(v));
                REQUIRE(v >= 0.0);
                REQUIRE(v <= 48.0);
            }
            seen_r.insert(x[0]);
            mean_r += x[0];
        }
        mean_r /= static_cast<double>(xs.size());
        if (std::string(name) == "fair-search-uniform") {
            CHECK(seen_r.size() == 49);
            CHECK(mean_r == doctest::Approx(24.0).epsilon(0.02));
        } else {
            CHECK(mean_r == doctest::Approx(48 * 0.56).epsilon(0.02));
            CHECK(seen_r.count(48.0) == 0);
        }
    }
}

TEST_CASE("plan validation")
{
    SamplePlan plan;
    plan.split = 1.0;
    CHECK_THROWS_AS(plan.validate(), InputError);
    plan.split = 0.9;
    plan.n_train = 0;
    CHECK_THROWS_AS(plan.validate(), InputError);
}

TEST_CASE("points csv has x_ header")
{
    std::ostringstream out;
    write_points_csv(out, {{1.0, 2.5}, {-0.0, 3.0}}, 2);
    CHECK(out.str() == "x_1,x_2\n1,2.5\n0,3\n");
}
