#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hnpf/linalg.hpp"

namespace hnpf {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Gradient of a scalar function. `at_kink` is set where the function is not
/// differentiable and `values` holds a one-sided (sub)gradient instead.
struct Gradient {
    Vector values;
    bool at_kink = false;
};

struct ScalarFunction {
    std::string label;
    std::function<double(std::span<const double>)> value;
    std::function<Gradient(std::span<const double>)> gradient;
};

/// Provenance of a constraint generated from a variable bound.
/// Two-sided bounds are g(x) = (x - lo)(x - hi); one-sided are lo - x or x - hi.
struct BoxBound {
    std::size_t variable = 0;
    std::size_t constraint = 0;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
};

enum class Sense { minimize, maximize };

/// Constrained multi-objective problem in canonical form:
/// minimize f_1..f_k subject to g_1..g_m <= 0, x in the sampling box.
///
/// Objectives declared as maximize are stored negated; `senses` remembers the
/// original direction so reports can undo it (see display_objectives).
struct MooProblem {
    std::string name;
    std::vector<Interval> bounds;
    std::vector<ScalarFunction> objectives;
    std::vector<ScalarFunction> constraints;
    std::vector<BoxBound> box_bounds;
    std::vector<Sense> senses;
    /// Per variable; integral variables are sampled on the integer lattice.
    std::vector<bool> integral;
    /// Default parameters for the binomial sampler (empty when not applicable).
    int binomial_trials = 0;
    Vector binomial_p;
    /// Distance from x to the known Pareto set in variable space; empty when unknown.
    std::function<double(std::span<const double>)> front_distance;

    std::size_t n() const noexcept { return bounds.size(); }
    std::size_t k() const noexcept { return objectives.size(); }
    std::size_t m() const noexcept { return constraints.size(); }
    bool has_front() const noexcept { return static_cast<bool>(front_distance); }

    /// Throws InputError on inconsistent shapes or empty/inverted bounds.
    void validate() const;
};

struct Point {
    Vector x;
    Vector fx;
    Vector gx;
};

/// Column i of `objectives` is ∇f_i (n×k); column j of `constraints` is ∇g_j (n×m).
struct Jacobians {
    Matrix objectives;
    Matrix constraints;
    bool at_kink = false;
};

Point evaluate(const MooProblem &problem, std::span<const double> x);
Jacobians gradients(const MooProblem &problem, std::span<const double> x);

constexpr double kFeasibilityTolerance = 1e-12;

bool is_feasible(std::span<const double> gx, double tolerance = kFeasibilityTolerance);

/// Objective values in the problem's original sense (maximized ones un-negated).
Vector display_objectives(const MooProblem &problem, std::span<const double> fx);

/// Appends g(x) = (x_v - lo)(x_v - hi) <= 0 and records it in box_bounds.
void add_box_constraint(MooProblem &problem, std::size_t variable, Interval range);
/// Appends g(x) = lo - x_v <= 0.
void add_lower_bound(MooProblem &problem, std::size_t variable, double lo);

/// Central finite-difference gradient, step h·max(1, |x_i|).
Gradient finite_difference_gradient(const std::function<double(std::span<const double>)> &f,
                                    std::span<const double> x, double h = 1e-6);

struct CaseOptions {
    /// Denominator of the Case VII g-function sum. 10000 gives the reference
    /// front shape; n - 1 gives the textbook form.
    double case7_normalizer = 10000.0;
};

/// Cases I..VII in order.
std::vector<MooProblem> builtin_cases(const CaseOptions &options = {});

/// "I".."VII"; throws InputError on an unknown name.
MooProblem builtin_case(std::string_view name, const CaseOptions &options = {});

const std::vector<std::string> &builtin_case_names();

double binary_entropy(double p);

/// Relevance/diversity search problem over integer counts (R, G) in [0, n_docs]²,
/// maximizing f_r = R/n_docs and f_g = H(G/n_docs).
MooProblem fair_search_problem(int n_docs, double p_r, double p_g);

} // namespace hnpf
