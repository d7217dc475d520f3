#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "hnpf/errors.hpp"
#include "hnpf/filter.hpp"
#include "hnpf/rng.hpp"

using namespace hnpf;

namespace {

std::vector<FrontPoint> make_points(const std::vector<Vector> &fs)
{
    std::vector<FrontPoint> out;
    for (std::size_t i = 0; i < fs.size(); ++i) {
        out.push_back({i, fs[i], fs[i], 1.0});
    }
    return out;
}

// Brute-force non-dominated set, written directly from the definition.
std::set<std::size_t> brute_force(const std::vector<FrontPoint> &pts)
{
    std::set<std::size_t> keep;
    for (std::size_t a = 0; a < pts.size(); ++a) {
        bool dominated = false;
        for (std::size_t b = 0; b < pts.size() && !dominated; ++b) {
            bool no_worse = true, better = false;
            for (std::size_t i = 0; i < pts[a].fx.size(); ++i) {
                no_worse = no_worse && pts[b].fx[i] <= pts[a].fx[i];
                better = better || pts[b].fx[i] < pts[a].fx[i];
            }
            dominated = no_worse && better;
        }
        if (!dominated) {
            keep.insert(a);
        }
    }
    return keep;
}

std::set<std::size_t> as_set(const StrongParetoSet &s)
{
    return {s.kept.begin(), s.kept.end()};
}

std::vector<FrontPoint> random_points(std::size_t count, std::size_t k, Rng &rng, bool grid = false)
{
    std::vector<Vector> fs(count, Vector(k));
    for (auto &f : fs) {
        for (double &v : f) {
            v = grid ? static_cast<double>(rng.below(6)) : rng.uniform(0.0, 1.0);
        }
    }
    return make_points(fs);
}

double smallest_gap(const std::vector<FrontPoint> &pts)
{
    double gap = 1.0;
    for (std::size_t i = 0; i < pts[0].fx.size(); ++i) {
        std::vector<double> v;
        for (const auto &p : pts) v.push_back(p.fx[i]);
        std::sort(v.begin(), v.end());
        for (std::size_t j = 1; j < v.size(); ++j) gap = std::min(gap, v[j] - v[j - 1]);
    }
    return gap;
}

FilterConfig config_with_h(const std::vector<FrontPoint> &pts, double h)
{
    FilterConfig cfg = FilterConfig::from_points(pts);
    cfg.h.assign(cfg.h.size(), h);
    return cfg;
}

const std::vector<Vector> kFour{{1, 2}, {2, 1}, {1.5, 1.5}, {2, 2}};

} // namespace

TEST_CASE("four-point example")
{
    const auto pts = make_points(kFour);
    const StrongParetoSet plane = plane_filter(pts, config_with_h(pts, 0.01));
    CHECK(plane.kept == std::vector<std::size_t>{0, 1, 2});
    CHECK(plane.points.size() == 3);
    CHECK(plane.points[2].fx == Vector{1.5, 1.5});
    CHECK(oracle_filter(pts).kept == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("small oracle examples")
{
    CHECK(oracle_filter(make_points({{0, 0}, {1, 1}})).kept == std::vector<std::size_t>{0});
    CHECK(oracle_filter(make_points({{3, 3}, {3, 3}, {3, 3}})).kept.size() == 3);
    const auto one = make_points({{0.4, 0.7}});
    CHECK(plane_filter(one, FilterConfig::from_points(one)).kept == std::vector<std::size_t>{0});
    CHECK(oracle_filter(one).kept == std::vector<std::size_t>{0});
    CHECK(dominates({0, 1}, {1, 1}));
    CHECK_FALSE(dominates({1, 1}, {1, 1}));
    CHECK_FALSE(dominates({0, 2}, {1, 1}));
}

TEST_CASE("errors")
{
    CHECK_THROWS_AS(plane_filter(std::vector<FrontPoint>{}, FilterConfig{{0, 0}, {1, 1}, {0.1, 0.1}}),
                    InputError);
    const auto pts = make_points(kFour);
    FilterConfig narrow{{1, 1}, {1.8, 2}, {0.1, 0.1}};
    CHECK_THROWS_AS(plane_filter(pts, narrow), InputError);
    FilterConfig zero_h{{1, 1}, {2, 2}, {0.0, 0.1}};
    CHECK_THROWS_AS(plane_filter(pts, zero_h), InputError);
    auto bad = pts;
    bad[1].fx[0] = std::nan("");
    CHECK_THROWS_AS(plane_filter(bad, FilterConfig{{0, 0}, {3, 3}, {0.1, 0.1}}), InputError);
}

TEST_CASE("oracle_filter equals the brute-force definition and is idempotent")
{
    Rng rng(21);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t k = 2 + trial % 3;
        const auto pts = random_points(1 + rng.below(200), k, rng, trial % 4 == 0);
        const StrongParetoSet once = oracle_filter(pts);
        CHECK(as_set(once) == brute_force(pts));
        const StrongParetoSet twice = oracle_filter(once.points);
        CHECK(twice.points.size() == once.points.size());
    }
}

TEST_CASE("plane_filter equals the oracle once h is below the smallest gap")
{
    Rng rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t k = 2 + trial % 3;
        const auto pts = random_points(2 + rng.below(150), k, rng);
        const double h = 0.5 * smallest_gap(pts);
        REQUIRE(h > 0.0);
        const StrongParetoSet plane = plane_filter(pts, config_with_h(pts, h));
        CHECK(as_set(plane) == brute_force(pts));
    }
}

TEST_CASE("plane_filter properties for any h")
{
    Rng rng(8);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t k = 2 + trial % 3;
        const auto pts = random_points(1 + rng.below(300), k, rng, trial % 3 == 0);
        const std::size_t levels = 1 + rng.below(60);
        FilterConfig cfg = FilterConfig::from_points(pts, levels);
        const StrongParetoSet bucketed = plane_filter(pts, cfg);
        cfg.mode = SweepMode::level_scan;
        const StrongParetoSet scanned = plane_filter(pts, cfg);

        CHECK(bucketed.kept == scanned.kept);
        CHECK(bucketed.points.size() >= 1);
        CHECK(std::is_sorted(bucketed.kept.begin(), bucketed.kept.end()));
        const auto oracle = brute_force(pts);
        for (std::size_t p : bucketed.kept) {
            CHECK(p < pts.size());
            CHECK(oracle.count(p) == 1);
        }
        for (std::size_t j = 0; j < bucketed.points.size(); ++j) {
            CHECK(bucketed.points[j].fx == pts[bucketed.kept[j]].fx);
        }
    }
}

TEST_CASE("single slab keeps one point per sweep")
{
    const auto pts = make_points(kFour);
    const StrongParetoSet s = plane_filter(pts, config_with_h(pts, 5.0));
    CHECK(s.single_slab == std::vector<bool>{true, true});
    CHECK(s.kept == std::vector<std::size_t>{1});

    const StrongParetoSet fine = plane_filter(pts, config_with_h(pts, 0.01));
    CHECK(fine.single_slab == std::vector<bool>{false, false});

    // A zero range collapses to one slab rather than failing.
    const auto flat = make_points({{1, 1}, {1, 2}, {1, 0.5}});
    const FilterConfig cfg = FilterConfig::from_points(flat);
    CHECK(cfg.slabs(0) == 1);
    CHECK(plane_filter(flat, cfg).kept == std::vector<std::size_t>{2});
}

TEST_CASE("slab boundaries")
{
    const FilterConfig cfg{{0.0}, {1.0}, {0.25}};
    CHECK(cfg.slabs(0) == 4);
    const FilterConfig uneven{{0.0}, {1.0}, {0.3}};
    CHECK(uneven.slabs(0) == 4);
    // The top value lands in the last (closed) slab and survives on its own.
    const auto pts = make_points({{0.0, 1.0}, {1.0, 0.0}});
    CHECK(plane_filter(pts, FilterConfig{{0, 0}, {1, 1}, {0.25, 0.25}}).kept.size() == 2);
}

TEST_CASE("complexity probe counts k*z*n")
{
    CHECK(filter_complexity_probe(50, 2, 100) == 2 * 100 * 50);
    CHECK(filter_complexity_probe(100, 2, 200) == 2 * 200 * 100);
    CHECK(filter_complexity_probe(100, 3, 200) == 3 * 200 * 100);
    // One objective: a single sweep, and the first point removes all others as it goes.
    CHECK(filter_complexity_probe(7, 1, 10) <= 10 * 7);
    CHECK(filter_complexity_probe(7, 1, 10) >= 10);
    CHECK(filter_complexity_probe(1, 4, 1) == 4);

    const double base = static_cast<double>(filter_complexity_probe(100, 2, 400));
    CHECK(static_cast<double>(filter_complexity_probe(200, 2, 400)) / base == doctest::Approx(2.0).epsilon(0.1));
    CHECK(static_cast<double>(filter_complexity_probe(100, 4, 400)) / base == doctest::Approx(2.0).epsilon(0.1));
    CHECK(static_cast<double>(filter_complexity_probe(100, 2, 800)) / base == doctest::Approx(2.0).epsilon(0.1));
    CHECK_THROWS_AS(filter_complexity_probe(0, 2, 3), InputError);
}

TEST_CASE("point tables")
{
    std::istringstream in("index,x_1,f_1,f_2,survived\n0,0.1,1,2,1\n1,0.2,2,1,0\n2,0.3,1.5,1.5,1\n3,0.4,2,2,0\n");
    const PointTable t = read_point_table(in);
    CHECK(t.n == 1);
    CHECK(t.k == 2);
    REQUIRE(t.points.size() == 4);
    CHECK(t.points[2].fx == Vector{1.5, 1.5});
    CHECK(t.points[3].x == Vector{0.4});

    const StrongParetoSet s = oracle_filter(t.points);
    std::ostringstream out;
    write_filter_csv(out, t.points, s);
    CHECK(out.str() == "index,x_1,f_1,f_2,survived\n0,0.1,1,2,1\n1,0.2,2,1,1\n2,0.3,1.5,1.5,1\n3,0.4,2,2,0\n");

    std::istringstream no_index("f_1,f_2\n1,2\n2,1\n");
    const PointTable u = read_point_table(no_index);
    CHECK(u.n == 0);
    CHECK(u.points[1].source == 1);

    std::istringstream bad("f_1,f_2\n1,2\n2,oops\n");
    try {
        read_point_table(bad);
        FAIL("expected InputError");
    } catch (const InputError &e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    std::istringstream no_f("x_1,x_2\n1,2\n");
    CHECK_THROWS_AS(read_point_table(no_f), InputError);
}
