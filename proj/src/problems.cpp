#include "hnpf/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hnpf/errors.hpp"

namespace hnpf {

namespace {

using std::numbers::pi;
using Fn = std::function<double(std::span<const double>)>;
using GradFn = std::function<Gradient(std::span<const double>)>;

void add_objective(MooProblem &p, std::string label, Fn value, GradFn gradient,
                   Sense sense = Sense::minimize)
{
    p.objectives.push_back({std::move(label), std::move(value), std::move(gradient)});
    p.senses.push_back(sense);
}

void add_constraint(MooProblem &p, std::string label, Fn value, GradFn gradient)
{
    p.constraints.push_back({std::move(label), std::move(value), std::move(gradient)});
}

/// f(x) = x_i
void add_coordinate_objective(MooProblem &p, std::size_t i)
{
    const std::size_t n = p.n();
    add_objective(
        p, "x" + std::to_string(i + 1), [i](std::span<const double> x) { return x[i]; },
        [i, n](std::span<const double>) {
            Gradient g{Vector(n, 0.0), false};
            g.values[i] = 1.0;
            return g;
        });
}

MooProblem make_problem(std::string name, std::vector<Interval> bounds)
{
    MooProblem p;
    p.name = std::move(name);
    p.integral.assign(bounds.size(), false);
    p.bounds = std::move(bounds);
    return p;
}

MooProblem case_one()
{
    const double a = 1.0 / std::numbers::sqrt2;
    MooProblem p = make_problem("I", {{-a, a}, {-a, a}});
    for (double centre : {a, -a}) {
        add_objective(
            p, centre > 0 ? "f1" : "f2",
            [centre](std::span<const double> x) {
                const double s = (x[0] - centre) * (x[0] - centre) + (x[1] - centre) * (x[1] - centre);
                return 1.0 - std::exp(-s);
            },
            [centre](std::span<const double> x) {
                const double s = (x[0] - centre) * (x[0] - centre) + (x[1] - centre) * (x[1] - centre);
                const double e = std::exp(-s);
                return Gradient{{2.0 * (x[0] - centre) * e, 2.0 * (x[1] - centre) * e}, false};
            });
    }
    add_box_constraint(p, 0, {-a, a});
    add_box_constraint(p, 1, {-a, a});
    p.front_distance = [a](std::span<const double> x) {
        const double t = std::clamp(0.5 * (x[0] + x[1]), -a, a);
        return std::hypot(x[0] - t, x[1] - t);
    };
    return p;
}

MooProblem case_two()
{
    MooProblem p = make_problem("II", {{0.0, 1.0}, {-2.0, 2.0}});
    add_coordinate_objective(p, 0);
    add_objective(
        p, "f2",
        [](std::span<const double> x) {
            return 1.0 + x[1] * x[1] - x[0] - 0.1 * std::sin(3.0 * pi * x[0]);
        },
        [](std::span<const double> x) {
            return Gradient{{-1.0 - 0.3 * pi * std::cos(3.0 * pi * x[0]), 2.0 * x[1]}, false};
        });
    add_box_constraint(p, 0, {0.0, 1.0});
    add_box_constraint(p, 1, {-2.0, 2.0});
    p.front_distance = [](std::span<const double> x) {
        return std::hypot(x[0] - std::clamp(x[0], 0.0, 1.0), x[1]);
    };
    return p;
}

// Shared by Cases III and VI: the disc and the wavy unit circle.
void add_tanaka_constraints(MooProblem &p)
{
    add_constraint(
        p, "disc",
        [](std::span<const double> x) {
            return (x[0] - 0.5) * (x[0] - 0.5) + (x[1] - 0.5) * (x[1] - 0.5) - 0.5;
        },
        [](std::span<const double> x) {
            return Gradient{{2.0 * (x[0] - 0.5), 2.0 * (x[1] - 0.5)}, false};
        });
    // x1² + x2² - 1 - 0.1 cos(16 atan(x1/x2)) >= 0, negated into canonical form.
    add_constraint(
        p, "wave",
        [](std::span<const double> x) {
            const double theta = std::atan(x[0] / x[1]);
            return -(x[0] * x[0] + x[1] * x[1] - 1.0) + 0.1 * std::cos(16.0 * theta);
        },
        [](std::span<const double> x) {
            const double theta = std::atan(x[0] / x[1]);
            const double r2 = x[0] * x[0] + x[1] * x[1];
            const double s = 1.6 * std::sin(16.0 * theta) / r2;
            return Gradient{{-2.0 * x[0] - s * x[1], -2.0 * x[1] + s * x[0]}, false};
        });
}

// The disc (x-0.5)² + (y-0.5)² <= 0.5 confines the feasible set to
// [0, 0.5 + √0.5]² inside the declared [0, π]² box; sample only there.
constexpr double kTanakaSamplingHi = 0.5 + 0.70710678118654752440;

MooProblem case_three()
{
    MooProblem p = make_problem("III", {{0.0, kTanakaSamplingHi}, {0.0, kTanakaSamplingHi}});
    add_coordinate_objective(p, 0);
    add_coordinate_objective(p, 1);
    add_tanaka_constraints(p);
    add_box_constraint(p, 0, {0.0, pi});
    add_box_constraint(p, 1, {0.0, pi});
    return p;
}

MooProblem case_four()
{
    MooProblem p = make_problem("IV", {{0.0, 2.0}, {0.0, 2.0}, {0.0, 2.0}});
    for (std::size_t i = 0; i < 3; ++i) {
        add_coordinate_objective(p, i);
    }
    add_constraint(
        p, "ball",
        [](std::span<const double> x) {
            double s = -1.0;
            for (double v : x) {
                s += (v - 1.0) * (v - 1.0);
            }
            return s;
        },
        [](std::span<const double> x) {
            Gradient g{Vector(3), false};
            for (std::size_t i = 0; i < 3; ++i) {
                g.values[i] = 2.0 * (x[i] - 1.0);
            }
            return g;
        });
    for (std::size_t i = 0; i < 3; ++i) {
        add_lower_bound(p, i, 0.0);
    }
    return p;
}

MooProblem case_five()
{
    constexpr std::size_t n = 30;
    std::vector<Interval> bounds(n, Interval{-1.0, 1.0});
    bounds[0] = {0.0, 1.0};
    MooProblem p = make_problem("V", bounds);

    // y_j = x_j - A_j(x1) B_j(x1), the same branch for odd and even j.
    struct Shift {
        double y;
        double dy_dx1;
    };
    auto shift = [](std::span<const double> x, std::size_t j) {
        const double x1 = x[0];
        const double jj = static_cast<double>(j);
        const double nn = static_cast<double>(n);
        const double pa = 24.0 * pi * x1 + 4.0 * jj * pi / nn;
        const double pb = 6.0 * pi * x1 + jj * pi / nn;
        const double a = 0.3 * x1 * x1 * std::cos(pa) + 0.6 * x1;
        const double da = 0.6 * x1 * std::cos(pa) - 0.3 * x1 * x1 * 24.0 * pi * std::sin(pa) + 0.6;
        const double b = std::cos(pb);
        const double db = -6.0 * pi * std::sin(pb);
        return Shift{x[j - 1] - a * b, -(da * b + a * db)};
    };

    // J1 = odd j in [2, n], J2 = even j in [2, n] (1-based).
    for (int parity : {1, 0}) {
        std::size_t count = 0;
        for (std::size_t j = 2; j <= n; ++j) {
            count += (j % 2 == static_cast<std::size_t>(parity)) ? 1 : 0;
        }
        const double scale = 2.0 / static_cast<double>(count);
        const bool first = parity == 1;
        add_objective(
            p, first ? "f1" : "f2",
            [=](std::span<const double> x) {
                double s = 0.0;
                for (std::size_t j = 2; j <= n; ++j) {
                    if (j % 2 == static_cast<std::size_t>(parity)) {
                        const double y = shift(x, j).y;
                        s += y * y;
                    }
                }
                return (first ? x[0] : 1.0 - std::sqrt(x[0])) + scale * s;
            },
            [=](std::span<const double> x) {
                Gradient g{Vector(n, 0.0), false};
                g.values[0] = first ? 1.0 : -0.5 / std::sqrt(x[0]);
                for (std::size_t j = 2; j <= n; ++j) {
                    if (j % 2 == static_cast<std::size_t>(parity)) {
                        const Shift s = shift(x, j);
                        g.values[0] += scale * 2.0 * s.y * s.dy_dx1;
                        g.values[j - 1] = scale * 2.0 * s.y;
                    }
                }
                return g;
            });
    }
    for (std::size_t i = 0; i < n; ++i) {
        add_box_constraint(p, i, p.bounds[i]);
    }
    return p;
}

MooProblem case_six()
{
    MooProblem p = make_problem("VI", {{0.0, kTanakaSamplingHi}, {0.0, kTanakaSamplingHi}});
    add_coordinate_objective(p, 0);
    add_coordinate_objective(p, 1);
    add_tanaka_constraints(p);
    // max(|x1-0.6|, |x2-0.7|) - 0.2 >= 0, negated. The active branch supplies the
    // gradient; ties go to the x1 branch and sign(0) is taken as +1.
    add_constraint(
        p, "box-exclusion",
        [](std::span<const double> x) {
            return 0.2 - std::max(std::abs(x[0] - 0.6), std::abs(x[1] - 0.7));
        },
        [](std::span<const double> x) {
            const double u = x[0] - 0.6;
            const double v = x[1] - 0.7;
            Gradient g{Vector(2, 0.0), false};
            if (std::abs(u) >= std::abs(v)) {
                g.values[0] = u >= 0.0 ? -1.0 : 1.0;
                g.at_kink = std::abs(u) == std::abs(v) || u == 0.0;
            } else {
                g.values[1] = v >= 0.0 ? -1.0 : 1.0;
                g.at_kink = v == 0.0;
            }
            return g;
        });
    add_box_constraint(p, 0, {0.0, pi});
    add_box_constraint(p, 1, {0.0, pi});
    return p;
}

MooProblem case_seven(double normalizer)
{
    constexpr std::size_t n = 30;
    std::vector<Interval> bounds(n, Interval{-1.0, 1.0});
    bounds[0] = {0.0, 1.0};
    MooProblem p = make_problem("VII", bounds);
    add_coordinate_objective(p, 0);

    auto g_function = [normalizer](std::span<const double> x) {
        double s = 0.0;
        for (std::size_t i = 1; i < x.size(); ++i) {
            s += x[i] * x[i];
        }
        return 1.0 + 9.0 * s / normalizer;
    };
    // f2 = g (1 - sqrt(x1/g) - (x1/g) sin(10π x1)) = g - sqrt(x1 g) - x1 sin(10π x1)
    add_objective(
        p, "f2",
        [g_function](std::span<const double> x) {
            const double g = g_function(x);
            const double ratio = x[0] / g;
            return g * (1.0 - std::sqrt(ratio) - ratio * std::sin(10.0 * pi * x[0]));
        },
        [g_function, normalizer](std::span<const double> x) {
            const double g = g_function(x);
            Gradient out{Vector(x.size(), 0.0), false};
            out.values[0] = -0.5 * std::sqrt(g / x[0]) - std::sin(10.0 * pi * x[0])
                            - 10.0 * pi * x[0] * std::cos(10.0 * pi * x[0]);
            const double factor = 1.0 - 0.5 * std::sqrt(x[0] / g);
            for (std::size_t i = 1; i < x.size(); ++i) {
                out.values[i] = 18.0 * x[i] / normalizer * factor;
            }
            return out;
        });
    for (std::size_t i = 0; i < n; ++i) {
        add_box_constraint(p, i, p.bounds[i]);
    }
    return p;
}

} // namespace

void MooProblem::validate() const
{
    if (bounds.empty()) {
        throw InputError("problem '" + name + "' has no variables");
    }
    if (objectives.empty()) {
        throw InputError("problem '" + name + "' has no objectives");
    }
    for (std::size_t i = 0; i < bounds.size(); ++i) {
        if (!(bounds[i].lo < bounds[i].hi)) {
            throw InputError("problem '" + name + "': bound " + std::to_string(i + 1)
                             + " must satisfy lo < hi");
        }
    }
    if (senses.size() != objectives.size()) {
        throw InputError("problem '" + name + "': one sense per objective required");
    }
    if (integral.size() != bounds.size()) {
        throw InputError("problem '" + name + "': one integrality flag per variable required");
    }
    if (!binomial_p.empty() && binomial_p.size() != bounds.size()) {
        throw InputError("problem '" + name + "': binomial_p must have one entry per variable");
    }
    for (const auto &f : objectives) {
        if (!f.value || !f.gradient) {
            throw InputError("problem '" + name + "': objective " + f.label + " is incomplete");
        }
    }
    for (const auto &g : constraints) {
        if (!g.value || !g.gradient) {
            throw InputError("problem '" + name + "': constraint " + g.label + " is incomplete");
        }
    }
}

Point evaluate(const MooProblem &problem, std::span<const double> x)
{
    if (x.size() != problem.n()) {
        throw InputError("evaluate: expected " + std::to_string(problem.n()) + " variables, got "
                         + std::to_string(x.size()));
    }
    Point p;
    p.x.assign(x.begin(), x.end());
    p.fx.reserve(problem.k());
    p.gx.reserve(problem.m());
    for (std::size_t i = 0; i < problem.k(); ++i) {
        const double v = problem.objectives[i].value(x);
        if (!std::isfinite(v)) {
            throw EvaluationError("objective f" + std::to_string(i + 1) + " is not finite", i);
        }
        p.fx.push_back(v);
    }
    for (std::size_t j = 0; j < problem.m(); ++j) {
        const double v = problem.constraints[j].value(x);
        if (!std::isfinite(v)) {
            throw EvaluationError("constraint g" + std::to_string(j + 1) + " is not finite",
                                  problem.k() + j);
        }
        p.gx.push_back(v);
    }
    return p;
}

Jacobians gradients(const MooProblem &problem, std::span<const double> x)
{
    const std::size_t n = problem.n();
    if (x.size() != n) {
        throw InputError("gradients: expected " + std::to_string(n) + " variables, got "
                         + std::to_string(x.size()));
    }
    Jacobians jac{Matrix(n, problem.k()), Matrix(n, problem.m()), false};
    auto fill = [&](const ScalarFunction &fn, Matrix &into, std::size_t col, std::size_t flat,
                    const char *kind) {
        Gradient g = fn.gradient(x);
        if (g.values.size() != n) {
            throw InputError(std::string("gradient of ") + kind + std::to_string(col + 1) + " has "
                             + std::to_string(g.values.size()) + " components, expected "
                             + std::to_string(n));
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (!std::isfinite(g.values[r])) {
                throw EvaluationError(std::string("gradient of ") + kind + std::to_string(col + 1)
                                          + " is not finite",
                                      flat);
            }
            into(r, col) = g.values[r];
        }
        jac.at_kink = jac.at_kink || g.at_kink;
    };
    for (std::size_t i = 0; i < problem.k(); ++i) {
        fill(problem.objectives[i], jac.objectives, i, i, "f");
    }
    for (std::size_t j = 0; j < problem.m(); ++j) {
        fill(problem.constraints[j], jac.constraints, j, problem.k() + j, "g");
    }
    return jac;
}

bool is_feasible(std::span<const double> gx, double tolerance)
{
    return std::all_of(gx.begin(), gx.end(), [tolerance](double g) { return g <= tolerance; });
}

Vector display_objectives(const MooProblem &problem, std::span<const double> fx)
{
    Vector out(fx.begin(), fx.end());
    for (std::size_t i = 0; i < out.size() && i < problem.senses.size(); ++i) {
        if (problem.senses[i] == Sense::maximize) {
            out[i] = -out[i];
        }
    }
    return out;
}

void add_box_constraint(MooProblem &problem, std::size_t variable, Interval range)
{
    const std::size_t n = problem.n();
    const double lo = range.lo;
    const double hi = range.hi;
    problem.box_bounds.push_back({variable, problem.m(), lo, hi});
    add_constraint(
        problem, "box x" + std::to_string(variable + 1),
        [variable, lo, hi](std::span<const double> x) { return (x[variable] - lo) * (x[variable] - hi); },
        [variable, lo, hi, n](std::span<const double> x) {
            Gradient g{Vector(n, 0.0), false};
            g.values[variable] = 2.0 * x[variable] - lo - hi;
            return g;
        });
}

void add_lower_bound(MooProblem &problem, std::size_t variable, double lo)
{
    const std::size_t n = problem.n();
    BoxBound bound;
    bound.variable = variable;
    bound.constraint = problem.m();
    bound.lo = lo;
    problem.box_bounds.push_back(bound);
    add_constraint(
        problem, "lower x" + std::to_string(variable + 1),
        [variable, lo](std::span<const double> x) { return lo - x[variable]; },
        [variable, n](std::span<const double>) {
            Gradient g{Vector(n, 0.0), false};
            g.values[variable] = -1.0;
            return g;
        });
}

Gradient finite_difference_gradient(const std::function<double(std::span<const double>)> &f,
                                    std::span<const double> x, double h)
{
    Vector probe(x.begin(), x.end());
    Gradient g{Vector(x.size()), false};
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double step = h * std::max(1.0, std::abs(x[i]));
        const double saved = probe[i];
        probe[i] = saved + step;
        const double up = f(probe);
        probe[i] = saved - step;
        const double down = f(probe);
        probe[i] = saved;
        g.values[i] = (up - down) / (2.0 * step);
    }
    return g;
}

const std::vector<std::string> &builtin_case_names()
{
    static const std::vector<std::string> names{"I", "II", "III", "IV", "V", "VI", "VII"};
    return names;
}

std::vector<MooProblem> builtin_cases(const CaseOptions &options)
{
    return {case_one(),  case_two(), case_three(),
            case_four(), case_five(), case_six(),
            case_seven(options.case7_normalizer)};
}

MooProblem builtin_case(std::string_view name, const CaseOptions &options)
{
    if (name == "I") return case_one();
    if (name == "II") return case_two();
    if (name == "III") return case_three();
    if (name == "IV") return case_four();
    if (name == "V") return case_five();
    if (name == "VI") return case_six();
    if (name == "VII") return case_seven(options.case7_normalizer);
    throw InputError("unknown case '" + std::string(name) + "'");
}

double binary_entropy(double p)
{
    auto term = [](double q) { return q > 0.0 ? -q * std::log2(q) : 0.0; };
    return term(p) + term(1.0 - p);
}

MooProblem fair_search_problem(int n_docs, double p_r, double p_g)
{
    if (n_docs <= 0) {
        throw InputError("fair search: n_docs must be positive");
    }
    for (double p : {p_r, p_g}) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw InputError("fair search: probabilities must lie in [0, 1]");
        }
    }
    const double docs = static_cast<double>(n_docs);
    MooProblem p = make_problem("fair-search", {{0.0, docs}, {0.0, docs}});
    p.integral.assign(2, true);
    p.binomial_trials = n_docs;
    p.binomial_p = {p_r, p_g};

    add_objective(
        p, "relevance", [docs](std::span<const double> x) { return -x[0] / docs; },
        [docs](std::span<const double>) { return Gradient{{-1.0 / docs, 0.0}, false}; },
        Sense::maximize);
    // H'(p) = log2((1-p)/p) diverges at p in {0, 1}; the slope is taken at a
    // clamped share there (the point is on an active bound, where L is singular anyway).
    add_objective(
        p, "diversity", [docs](std::span<const double> x) { return -binary_entropy(x[1] / docs); },
        [docs](std::span<const double> x) {
            const double share = std::clamp(x[1] / docs, 1e-9, 1.0 - 1e-9);
            return Gradient{{0.0, -std::log2((1.0 - share) / share) / docs}, false};
        },
        Sense::maximize);
    add_box_constraint(p, 0, {0.0, docs});
    add_box_constraint(p, 1, {0.0, docs});
    return p;
}

} // namespace hnpf
