#include <doctest.h>

#include <cmath>

#include "hnpf/errors.hpp"
#include "hnpf/filter.hpp"
#include "hnpf/verify.hpp"

using namespace hnpf;

namespace {

FrontPoint at(const MooProblem &p, Vector x, std::size_t source = 0)
{
    return {source, x, evaluate(p, x).fx, 1.0};
}

} // namespace

TEST_CASE("density")
{
    const DensityReport two = density(1648, 90000, "II");
    CHECK(two.percent == doctest::Approx(1.8311111).epsilon(1e-6));
    CHECK(to_text(two) == "II: density 1.83% (1648 points / 90000 evaluations)");
    CHECK(density(5915, 90000).percent == doctest::Approx(6.5722222).epsilon(1e-6));
    CHECK(density(0, 90000).percent == 0.0);
    CHECK(density(0, 0).percent == 0.0);
    CHECK_THROWS_AS(density(5, 4), InputError);
    CHECK_THROWS_AS(density(1, 0), InputError);

    const auto j = to_json(two);
    CHECK(j["points"] == 1648);
    CHECK(j["evaluations"] == 90000);
    CHECK(j["case"] == "II");
}

TEST_CASE("filtering never raises density")
{
    std::vector<FrontPoint> pts;
    for (std::size_t i = 0; i < 50; ++i) {
        const double t = static_cast<double>(i) / 49.0;
        pts.push_back({i, {t}, {t, std::fmod(7.0 * t, 1.0)}, 1.0});
    }
    const auto strong = oracle_filter(pts);
    CHECK(density(strong.points.size(), 1000).percent <= density(pts.size(), 1000).percent);
}

TEST_CASE("front error")
{
    const MooProblem one = builtin_case("I");
    std::vector<FrontPoint> diagonal;
    for (double t : {-0.6, -0.1, 0.0, 0.3, 0.7}) {
        diagonal.push_back(at(one, {t, t}));
    }
    const FrontErrorReport exact = front_error(diagonal, one, 0.05, ErrorMode::max_distance);
    CHECK(exact.max_distance == doctest::Approx(0.0).scale(1.0));
    CHECK(exact.fraction_within == 1.0);
    CHECK(exact.pass);

    const MooProblem two = builtin_case("II");
    const FrontErrorReport near = front_error({at(two, {0.5, 0.03})}, two, 0.05);
    CHECK(near.distances[0] == doctest::Approx(0.03));
    CHECK(near.pass);

    // 19 of 20 within tolerance passes the 95% quantile but not max-distance.
    std::vector<FrontPoint> mostly;
    for (int i = 0; i < 19; ++i) mostly.push_back(at(two, {0.05 * i, 0.01}));
    mostly.push_back(at(two, {0.5, 0.4}));
    const FrontErrorReport q = front_error(mostly, two);
    CHECK(q.fraction_within == doctest::Approx(0.95));
    CHECK(q.max_distance == doctest::Approx(0.4));
    CHECK(q.pass);
    CHECK_FALSE(front_error(mostly, two, 0.05, ErrorMode::max_distance).pass);
    mostly.push_back(at(two, {0.5, -0.3}));
    CHECK_FALSE(front_error(mostly, two).pass);

    // Distances do not depend on the input order.
    std::vector<FrontPoint> reversed(mostly.rbegin(), mostly.rend());
    const FrontErrorReport r = front_error(reversed, two);
    CHECK(r.fraction_within == front_error(mostly, two).fraction_within);
    CHECK(r.max_distance == front_error(mostly, two).max_distance);

    CHECK_FALSE(front_error({}, two).pass);
    CHECK_THROWS_AS(front_error(diagonal, builtin_case("III")), UnsupportedError);

    const auto j = to_json(q);
    CHECK(j["points"] == 20);
    CHECK(j["mode"] == "quantile");
    CHECK(to_text(q) == "front error: 95.0% of 20 points within 0.050, max distance 0.4000 [pass]");
}

TEST_CASE("certification")
{
    const MooProblem one = builtin_case("I");
    std::vector<Vector> front;
    for (int i = 0; i < 21; ++i) {
        const double t = -0.7 + 0.07 * i;
        front.push_back({t, t});
    }
    for (const auto &c : certify_points(one, front)) {
        CHECK(c.pass);
    }
    auto mixed = front;
    mixed.push_back({0.5, -0.5});
    const auto certs = certify_points(one, mixed);
    CHECK_FALSE(certs.back().pass);
    CHECK(certs.back().normalized == 1.0);
    for (std::size_t i = 0; i + 1 < certs.size(); ++i) {
        CHECK(certs[i].pass);
    }
    CHECK_THROWS_AS(certify_points(one, {}), InputError);

    const MooProblem three = builtin_case("III");
    const auto infeasible = certify_points(three, {Vector{0.1, 0.1}, Vector{1.0, 0.2}});
    CHECK_FALSE(infeasible[0].feasible);
    CHECK_FALSE(infeasible[0].pass);
}
