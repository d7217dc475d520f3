#include "hnpf/problem_io.hpp"

#include <fstream>
#include <memory>

#include "hnpf/errors.hpp"
#include "hnpf/expression.hpp"

namespace hnpf {

namespace {

using nlohmann::json;

struct ParsedTerm {
    std::string expr;
    std::vector<std::string> grad;
    Sense sense = Sense::minimize;
};

ParsedTerm parse_term(const json &node, const std::string &where)
{
    ParsedTerm t;
    if (node.is_string()) {
        t.expr = node.get<std::string>();
        return t;
    }
    if (!node.is_object() || !node.contains("expr")) {
        throw InputError(where + ": expected a string or an object with \"expr\"");
    }
    t.expr = node.at("expr").get<std::string>();
    if (node.contains("grad")) {
        t.grad = node.at("grad").get<std::vector<std::string>>();
    }
    if (node.contains("sense")) {
        const auto s = node.at("sense").get<std::string>();
        if (s == "maximize" || s == "max") {
            t.sense = Sense::maximize;
        } else if (s != "minimize" && s != "min") {
            throw InputError(where + ": sense must be minimize or maximize");
        }
    }
    return t;
}

ScalarFunction compile_term(const ParsedTerm &t, std::size_t n, bool allow_fd, bool negate,
                            const std::string &label)
{
    auto value = std::make_shared<Expression>(Expression::parse(t.expr, n));
    const double sign = negate ? -1.0 : 1.0;
    ScalarFunction fn;
    fn.label = label;
    fn.value = [value, sign](std::span<const double> x) { return sign * (*value)(x); };

    if (!t.grad.empty()) {
        if (t.grad.size() != n) {
            throw InputError(label + ": grad has " + std::to_string(t.grad.size())
                             + " entries, expected " + std::to_string(n));
        }
        auto parts = std::make_shared<std::vector<Expression>>();
        for (const auto &g : t.grad) {
            parts->push_back(Expression::parse(g, n));
        }
        fn.gradient = [parts, sign](std::span<const double> x) {
            Gradient g{Vector(parts->size()), false};
            for (std::size_t i = 0; i < parts->size(); ++i) {
                g.values[i] = sign * (*parts)[i](x);
            }
            return g;
        };
    } else if (allow_fd) {
        auto f = fn.value;
        fn.gradient = [f](std::span<const double> x) { return finite_difference_gradient(f, x); };
    } else {
        throw InputError(label + ": no \"grad\" given and finite_differences is not enabled");
    }
    return fn;
}

} // namespace

MooProblem problem_from_json(const json &desc)
{
    try {
        MooProblem p;
        p.name = desc.value("name", std::string("custom"));
        for (const auto &b : desc.at("bounds")) {
            if (!b.is_array() || b.size() != 2) {
                throw InputError("bounds: each entry must be [lo, hi]");
            }
            p.bounds.push_back({b[0].get<double>(), b[1].get<double>()});
        }
        const std::size_t n = p.bounds.size();
        p.integral = desc.contains("integral") ? desc.at("integral").get<std::vector<bool>>()
                                               : std::vector<bool>(n, false);
        const bool allow_fd = desc.value("finite_differences", false);

        const auto &objectives = desc.at("objectives");
        for (std::size_t i = 0; i < objectives.size(); ++i) {
            const std::string label = "f" + std::to_string(i + 1);
            ParsedTerm t = parse_term(objectives[i], "objectives[" + std::to_string(i) + "]");
            p.objectives.push_back(compile_term(t, n, allow_fd, t.sense == Sense::maximize, label));
            p.senses.push_back(t.sense);
        }
        if (desc.contains("constraints")) {
            const auto &constraints = desc.at("constraints");
            for (std::size_t j = 0; j < constraints.size(); ++j) {
                const std::string label = "g" + std::to_string(j + 1);
                ParsedTerm t = parse_term(constraints[j], "constraints[" + std::to_string(j) + "]");
                p.constraints.push_back(compile_term(t, n, allow_fd, false, label));
            }
        }
        if (desc.value("box_constraints", true)) {
            for (std::size_t i = 0; i < n; ++i) {
                add_box_constraint(p, i, p.bounds[i]);
            }
        }
        auto check = [&desc](const char *key, std::size_t actual) {
            if (desc.contains(key) && desc.at(key).get<std::size_t>() != actual) {
                throw InputError(std::string("declared ") + key + " = "
                                 + std::to_string(desc.at(key).get<std::size_t>())
                                 + " but the problem has " + std::to_string(actual));
            }
        };
        check("n", p.n());
        check("k", p.k());
        check("m", p.m());
        p.validate();
        return p;
    } catch (const json::exception &e) {
        throw InputError(std::string("problem description: ") + e.what());
    }
}

MooProblem load_problem_file(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open problem file " + path.string());
    }
    json desc;
    try {
        in >> desc;
    } catch (const json::exception &e) {
        throw InputError(path.string() + ": " + e.what());
    }
    return problem_from_json(desc);
}

} // namespace hnpf
