#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hnpf {

/// Arithmetic expression over variables x1..xn, compiled to a postfix program.
///
/// Grammar: + - * / ^ (right-associative), unary minus, parentheses,
/// constants `pi` and `e`, unary functions sin cos tan asin acos atan exp log
/// log2 sqrt abs, binary functions atan2 min max pow.
class Expression {
public:
    /// Throws InputError with the column of the first bad token.
    static Expression parse(std::string_view text, std::size_t variables);

    double operator()(std::span<const double> x) const;

    const std::string &text() const noexcept { return text_; }

    enum class Op : unsigned char {
        constant, variable, negate, add, subtract, multiply, divide, power,
        sin, cos, tan, asin, acos, atan, exp, log, log2, sqrt, abs,
        atan2, min, max
    };

    struct Instruction {
        Op op;
        double value = 0.0;
        std::size_t index = 0;
    };

private:
    std::string text_;
    std::vector<Instruction> program_;
};

} // namespace hnpf
