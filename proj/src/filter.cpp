#include "hnpf/filter.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <iterator>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <string>

#include "hnpf/csv.hpp"
#include "hnpf/errors.hpp"

namespace hnpf {

namespace {

/// Points that started the current sweep in a lower slab, projected onto every
/// objective except the swept one. Lower slab already means strictly smaller
/// f_i, so y is dominated iff some archived projection is <= y's everywhere.
class Archive {
public:
    explicit Archive(std::size_t dims) : dims_(dims) {}

    bool covers(const Vector &y) const
    {
        switch (dims_) {
        case 0:
            return count_ > 0;
        case 1:
            return count_ > 0 && min_ <= y[0];
        case 2: {
            auto it = stairs_.upper_bound(y[0]);
            return it != stairs_.begin() && std::prev(it)->second <= y[1];
        }
        default:
            return std::any_of(list_.begin(), list_.end(), [&](const Vector &a) {
                for (std::size_t d = 0; d < dims_; ++d) {
                    if (a[d] > y[d]) {
                        return false;
                    }
                }
                return true;
            });
        }
    }

    void insert(const Vector &y)
    {
        ++count_;
        switch (dims_) {
        case 0:
            return;
        case 1:
            min_ = std::min(min_, y[0]);
            return;
        case 2: {
            if (covers(y)) {
                return;
            }
            // Entries with a >= y0 and b >= y1 are now redundant; b falls as a rises.
            auto it = stairs_.lower_bound(y[0]);
            while (it != stairs_.end() && it->second >= y[1]) {
                it = stairs_.erase(it);
            }
            stairs_[y[0]] = y[1];
            return;
        }
        default:
            if (!covers(y)) {
                list_.push_back(y);
            }
        }
    }

private:
    std::size_t dims_;
    std::size_t count_ = 0;
    double min_ = std::numeric_limits<double>::infinity();
    std::map<double, double> stairs_;
    std::vector<Vector> list_;
};

Vector project_out(const Vector &f, std::size_t skip)
{
    Vector out;
    out.reserve(f.size() - 1);
    for (std::size_t j = 0; j < f.size(); ++j) {
        if (j != skip) {
            out.push_back(f[j]);
        }
    }
    return out;
}

std::size_t slab_of(double f, double lo, double h, std::size_t z)
{
    const double s = std::floor((f - lo) / h);
    if (!(s > 0.0)) {
        return 0;
    }
    return std::min(static_cast<std::size_t>(std::min(s, 1e18)), z - 1);
}

/// Ordering key for the in-slab survivor: f_q, then f_i, then the remaining
/// objectives in order, then input position.
bool slab_less(const std::vector<FrontPoint> &pts, std::size_t a, std::size_t b, std::size_t i,
               std::size_t q)
{
    const Vector &fa = pts[a].fx;
    const Vector &fb = pts[b].fx;
    if (fa[q] != fb[q]) {
        return fa[q] < fb[q];
    }
    if (fa[i] != fb[i]) {
        return fa[i] < fb[i];
    }
    for (std::size_t j = 0; j < fa.size(); ++j) {
        if (j != i && j != q && fa[j] != fb[j]) {
            return fa[j] < fb[j];
        }
    }
    return a < b;
}

class Sweeper {
public:
    Sweeper(const std::vector<FrontPoint> &points, const FilterConfig &config)
        : pts_(points), cfg_(config), active_(points.size(), true)
    {
    }

    StrongParetoSet run()
    {
        const std::size_t k = cfg_.k();
        StrongParetoSet out;
        out.single_slab.assign(k, false);
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t z = cfg_.slabs(i);
            out.single_slab[i] = z == 1;
            sweep(i, z);
        }
        out.scan_iterations = scans_;
        for (std::size_t p = 0; p < pts_.size(); ++p) {
            if (active_[p]) {
                out.kept.push_back(p);
                out.points.push_back(pts_[p]);
            }
        }
        return out;
    }

private:
    void sweep(std::size_t i, std::size_t z)
    {
        const std::size_t k = cfg_.k();
        const std::size_t q = (i + 1) % k;
        const double lo = cfg_.f_min[i];
        const double h = cfg_.h[i];

        // Everything active at the start of the sweep, ordered by slab.
        std::vector<std::pair<std::size_t, std::size_t>> order;
        for (std::size_t p = 0; p < pts_.size(); ++p) {
            if (active_[p]) {
                order.emplace_back(slab_of(pts_[p].fx[i], lo, h, z), p);
            }
        }
        std::sort(order.begin(), order.end());

        Archive archive(k - 1);
        std::size_t cursor = 0;
        std::vector<std::size_t> members;
        auto settle = [&](std::size_t slab) {
            // Points of lower slabs join the archive whether or not they survived.
            while (cursor < order.size() && order[cursor].first < slab) {
                archive.insert(project_out(pts_[order[cursor].second].fx, i));
                ++cursor;
            }
            process_slab(members, archive, i, q);
        };

        if (cfg_.mode == SweepMode::bucketed) {
            std::size_t pos = 0;
            while (pos < order.size()) {
                const std::size_t slab = order[pos].first;
                members.clear();
                for (; pos < order.size() && order[pos].first == slab; ++pos) {
                    members.push_back(order[pos].second);
                }
                scans_ += members.size();
                settle(slab);
            }
            return;
        }

        for (std::size_t level = 0; level < z; ++level) {
            members.clear();
            for (std::size_t p = 0; p < pts_.size(); ++p) {
                if (!active_[p]) {
                    continue;
                }
                ++scans_;
                if (slab_of(pts_[p].fx[i], lo, h, z) == level) {
                    members.push_back(p);
                }
            }
            if (!members.empty()) {
                settle(level);
            }
        }
    }

    void process_slab(std::vector<std::size_t> &members, const Archive &archive, std::size_t i,
                      std::size_t q)
    {
        std::vector<std::size_t> left;
        for (std::size_t p : members) {
            if (archive.covers(project_out(pts_[p].fx, i))) {
                active_[p] = false;
            } else {
                left.push_back(p);
            }
        }
        if (left.size() <= 1) {
            return;
        }
        const std::size_t best = *std::min_element(left.begin(), left.end(), [&](std::size_t a, std::size_t b) {
            return slab_less(pts_, a, b, i, q);
        });
        for (std::size_t p : left) {
            if (p != best) {
                active_[p] = false;
            }
        }
    }

    const std::vector<FrontPoint> &pts_;
    const FilterConfig &cfg_;
    std::vector<bool> active_;
    std::size_t scans_ = 0;
};

void check_points(const std::vector<FrontPoint> &points, std::size_t k)
{
    if (points.empty()) {
        throw InputError("filter: empty candidate set");
    }
    for (std::size_t p = 0; p < points.size(); ++p) {
        if (points[p].fx.size() != k) {
            throw InputError("filter: point " + std::to_string(p) + " has " +
                             std::to_string(points[p].fx.size()) + " objectives, expected " +
                             std::to_string(k));
        }
        for (double v : points[p].fx) {
            if (!std::isfinite(v)) {
                throw InputError("filter: point " + std::to_string(p) + " has a non-finite objective");
            }
        }
    }
}

} // namespace

std::size_t FilterConfig::slabs(std::size_t i) const
{
    const double range = f_max[i] - f_min[i];
    if (!(range > 0.0) || h[i] >= range) {
        return 1;
    }
    const double z = std::ceil(range / h[i]);
    if (z > 1e15) {
        throw InputError("filter: h is too small for the objective range");
    }
    return static_cast<std::size_t>(z);
}

void FilterConfig::validate() const
{
    if (h.empty() || f_min.size() != h.size() || f_max.size() != h.size()) {
        throw InputError("filter config: f_min, f_max and h need one entry per objective");
    }
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (!(h[i] > 0.0) || !std::isfinite(h[i])) {
            throw InputError("filter config: h must be positive and finite");
        }
        if (!(f_min[i] <= f_max[i]) || !std::isfinite(f_min[i]) || !std::isfinite(f_max[i])) {
            throw InputError("filter config: need finite f_min <= f_max");
        }
    }
}

FilterConfig FilterConfig::from_points(const std::vector<FrontPoint> &points, std::size_t levels)
{
    if (points.empty()) {
        throw InputError("filter: empty candidate set");
    }
    if (levels == 0) {
        throw InputError("filter: level count must be positive");
    }
    const std::size_t k = points.front().fx.size();
    check_points(points, k);
    FilterConfig cfg;
    cfg.f_min.assign(k, std::numeric_limits<double>::infinity());
    cfg.f_max.assign(k, -std::numeric_limits<double>::infinity());
    for (const auto &p : points) {
        for (std::size_t i = 0; i < k; ++i) {
            cfg.f_min[i] = std::min(cfg.f_min[i], p.fx[i]);
            cfg.f_max[i] = std::max(cfg.f_max[i], p.fx[i]);
        }
    }
    cfg.h.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        const double range = cfg.f_max[i] - cfg.f_min[i];
        cfg.h[i] = range > 0.0 ? range / static_cast<double>(levels) : 1.0;
    }
    return cfg;
}

StrongParetoSet plane_filter(const std::vector<FrontPoint> &points, const FilterConfig &config)
{
    config.validate();
    check_points(points, config.k());
    for (std::size_t p = 0; p < points.size(); ++p) {
        for (std::size_t i = 0; i < config.k(); ++i) {
            const double f = points[p].fx[i];
            if (f < config.f_min[i] || f > config.f_max[i]) {
                throw InputError("filter: point " + std::to_string(p) + " lies outside the objective bounds");
            }
        }
    }
    return Sweeper(points, config).run();
}

StrongParetoSet plane_filter(const WeakParetoSet &weak, const FilterConfig &config)
{
    return plane_filter(weak.points, config);
}

bool dominates(const Vector &a, const Vector &b)
{
    bool strict = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) {
            return false;
        }
        strict = strict || a[i] < b[i];
    }
    return strict;
}

StrongParetoSet oracle_filter(const std::vector<FrontPoint> &points)
{
    if (points.empty()) {
        throw InputError("filter: empty candidate set");
    }
    check_points(points, points.front().fx.size());
    StrongParetoSet out;
    out.single_slab.assign(points.front().fx.size(), false);
    for (std::size_t p = 0; p < points.size(); ++p) {
        bool dominated = false;
        for (std::size_t o = 0; o < points.size() && !dominated; ++o) {
            ++out.scan_iterations;
            dominated = o != p && dominates(points[o].fx, points[p].fx);
        }
        if (!dominated) {
            out.kept.push_back(p);
            out.points.push_back(points[p]);
        }
    }
    return out;
}

StrongParetoSet oracle_filter(const WeakParetoSet &weak)
{
    return oracle_filter(weak.points);
}

std::size_t filter_complexity_probe(std::size_t n_points, std::size_t k, std::size_t z)
{
    if (n_points == 0 || k == 0 || z == 0) {
        throw InputError("complexity probe: counts must be positive");
    }
    // f_1 rises and f_2 falls with j, so no point dominates another; further
    // objectives repeat the two patterns. The range [0, 1] split into z slabs
    // puts each point in its own slab when 2n <= z (n = z can pair up neighbours by rounding).
    const double n = static_cast<double>(n_points);
    std::vector<FrontPoint> pts(n_points);
    for (std::size_t j = 0; j < n_points; ++j) {
        pts[j].source = j;
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t v = i % 2 == 0 ? j : n_points - 1 - j;
            pts[j].fx.push_back(static_cast<double>(v) / n);
        }
    }
    FilterConfig cfg;
    cfg.mode = SweepMode::level_scan;
    cfg.f_min.assign(k, 0.0);
    cfg.f_max.assign(k, 1.0);
    cfg.h.assign(k, 1.0 / static_cast<double>(z));
    for (std::size_t i = 0; i < k; ++i) {
        while (cfg.slabs(i) > z) {
            cfg.h[i] = std::nextafter(cfg.h[i], 2.0);
        }
    }
    return plane_filter(pts, cfg).scan_iterations;
}

PointTable read_point_table(std::istream &in, std::size_t k)
{
    const csv::Table table = csv::read(in);
    PointTable out;
    std::vector<std::size_t> xcols, fcols;
    long index_col = -1;
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        const std::string &name = table.header[c];
        if (name == "index") {
            index_col = static_cast<long>(c);
        } else if (name.rfind("x_", 0) == 0) {
            xcols.push_back(c);
        } else if (name.rfind("f_", 0) == 0) {
            fcols.push_back(c);
        }
    }
    if (fcols.empty()) {
        throw InputError("point table: no f_* columns in header");
    }
    if (k != 0 && k != fcols.size()) {
        throw InputError("point table: expected " + std::to_string(k) + " objective columns, found " +
                         std::to_string(fcols.size()));
    }
    out.n = xcols.size();
    out.k = fcols.size();
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto &row = table.rows[r];
        FrontPoint p;
        p.source = r;
        if (index_col >= 0) {
            const double idx = row[static_cast<std::size_t>(index_col)];
            if (!(idx >= 0.0) || idx != std::floor(idx)) {
                throw InputError("line " + std::to_string(table.lines[r]) + ": index must be a non-negative integer");
            }
            p.source = static_cast<std::size_t>(idx);
        }
        for (std::size_t c : xcols) {
            p.x.push_back(row[c]);
        }
        for (std::size_t c : fcols) {
            if (!std::isfinite(row[c])) {
                throw InputError("line " + std::to_string(table.lines[r]) + ": non-finite objective");
            }
            p.fx.push_back(row[c]);
        }
        out.points.push_back(std::move(p));
    }
    return out;
}

namespace {

std::vector<std::string> front_header(const std::vector<FrontPoint> &points, const std::string &last)
{
    const std::size_t n = points.empty() ? 0 : points.front().x.size();
    const std::size_t k = points.empty() ? 0 : points.front().fx.size();
    std::vector<std::string> header{"index"};
    for (auto &s : csv::numbered("x_", n)) {
        header.push_back(s);
    }
    for (auto &s : csv::numbered("f_", k)) {
        header.push_back(s);
    }
    header.push_back(last);
    return header;
}

Vector front_row(const FrontPoint &p, double last)
{
    Vector row{static_cast<double>(p.source)};
    row.insert(row.end(), p.x.begin(), p.x.end());
    row.insert(row.end(), p.fx.begin(), p.fx.end());
    row.push_back(last);
    return row;
}

} // namespace

void write_filter_csv(std::ostream &out, const std::vector<FrontPoint> &points,
                      const StrongParetoSet &result)
{
    csv::write_row(out, front_header(points, "survived"));
    std::vector<bool> kept(points.size(), false);
    for (std::size_t p : result.kept) {
        kept[p] = true;
    }
    for (std::size_t p = 0; p < points.size(); ++p) {
        csv::write_row(out, front_row(points[p], kept[p] ? 1.0 : 0.0));
    }
}

void write_front_csv(std::ostream &out, const std::vector<FrontPoint> &points)
{
    csv::write_row(out, front_header(points, "p_pareto"));
    for (const auto &p : points) {
        csv::write_row(out, front_row(p, p.p_pareto));
    }
}

} // namespace hnpf
