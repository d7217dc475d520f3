#include "hnpf/expression.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <utility>

#include "hnpf/errors.hpp"

namespace hnpf {

namespace {

using Op = Expression::Op;
using Instruction = Expression::Instruction;

struct NamedOp {
    std::string_view name;
    Op op;
    int arity;
};

constexpr std::array<NamedOp, 17> kFunctions{{
    {"sin", Op::sin, 1},   {"cos", Op::cos, 1},   {"tan", Op::tan, 1},     {"asin", Op::asin, 1},
    {"acos", Op::acos, 1}, {"atan", Op::atan, 1}, {"exp", Op::exp, 1},     {"log", Op::log, 1},
    {"log2", Op::log2, 1}, {"sqrt", Op::sqrt, 1}, {"abs", Op::abs, 1},     {"atan2", Op::atan2, 2},
    {"min", Op::min, 2},   {"max", Op::max, 2},   {"pow", Op::power, 2},   {"ln", Op::log, 1},
    {"fabs", Op::abs, 1},
}};

class Parser {
public:
    Parser(std::string_view text, std::size_t variables) : text_(text), variables_(variables) {}

    std::vector<Instruction> run()
    {
        expression();
        skip_space();
        if (pos_ != text_.size()) {
            fail("unexpected character");
        }
        return std::move(program_);
    }

private:
    [[noreturn]] void fail(const std::string &why) const
    {
        throw InputError("expression '" + std::string(text_) + "': " + why + " at column "
                         + std::to_string(pos_ + 1));
    }

    void skip_space()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char c)
    {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c)
    {
        if (!accept(c)) {
            fail(std::string("expected '") + c + "'");
        }
    }

    void emit(Op op, double value = 0.0, std::size_t index = 0) { program_.push_back({op, value, index}); }

    void expression()
    {
        term();
        for (;;) {
            if (accept('+')) {
                term();
                emit(Op::add);
            } else if (accept('-')) {
                term();
                emit(Op::subtract);
            } else {
                return;
            }
        }
    }

    void term()
    {
        unary();
        for (;;) {
            if (accept('*')) {
                unary();
                emit(Op::multiply);
            } else if (accept('/')) {
                unary();
                emit(Op::divide);
            } else {
                return;
            }
        }
    }

    void unary()
    {
        if (accept('-')) {
            unary();
            emit(Op::negate);
        } else if (accept('+')) {
            unary();
        } else {
            power();
        }
    }

    void power()
    {
        primary();
        if (accept('^')) {
            unary();
            emit(Op::power);
        }
    }

    void primary()
    {
        skip_space();
        if (pos_ >= text_.size()) {
            fail("unexpected end of input");
        }
        const char c = text_[pos_];
        if (accept('(')) {
            expression();
            expect(')');
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            number();
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            identifier();
            return;
        }
        fail("unexpected character");
    }

    void number()
    {
        double value = 0.0;
        const char *first = text_.data() + pos_;
        const char *last = text_.data() + text_.size();
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc{}) {
            fail("malformed number");
        }
        pos_ += static_cast<std::size_t>(ptr - first);
        emit(Op::constant, value);
    }

    void identifier()
    {
        const std::size_t start = pos_;
        while (pos_ < text_.size()
               && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
        }
        const std::string_view name = text_.substr(start, pos_ - start);

        if (name == "pi") {
            emit(Op::constant, std::numbers::pi);
            return;
        }
        if (name == "e") {
            emit(Op::constant, std::numbers::e);
            return;
        }
        if (name.size() > 1 && name[0] == 'x') {
            std::size_t index = 0;
            auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), index);
            if (ec == std::errc{} && ptr == name.data() + name.size()) {
                if (index < 1 || index > variables_) {
                    pos_ = start;
                    fail("variable " + std::string(name) + " out of range x1..x"
                         + std::to_string(variables_));
                }
                emit(Op::variable, 0.0, index - 1);
                return;
            }
        }
        for (const auto &fn : kFunctions) {
            if (fn.name != name) {
                continue;
            }
            expect('(');
            expression();
            for (int a = 1; a < fn.arity; ++a) {
                expect(',');
                expression();
            }
            expect(')');
            emit(fn.op);
            return;
        }
        pos_ = start;
        fail("unknown identifier '" + std::string(name) + "'");
    }

    std::string_view text_;
    std::size_t variables_;
    std::size_t pos_ = 0;
    std::vector<Instruction> program_;
};

} // namespace

Expression Expression::parse(std::string_view text, std::size_t variables)
{
    Expression e;
    e.text_ = std::string(text);
    e.program_ = Parser(text, variables).run();
    return e;
}

double Expression::operator()(std::span<const double> x) const
{
    // Postfix programs from the parser never need more than program_.size() slots.
    std::vector<double> stack;
    stack.reserve(program_.size());
    auto pop = [&stack] {
        const double v = stack.back();
        stack.pop_back();
        return v;
    };
    for (const auto &ins : program_) {
        switch (ins.op) {
        case Op::constant: stack.push_back(ins.value); break;
        case Op::variable: stack.push_back(x[ins.index]); break;
        case Op::negate: stack.back() = -stack.back(); break;
        case Op::sin: stack.back() = std::sin(stack.back()); break;
        case Op::cos: stack.back() = std::cos(stack.back()); break;
        case Op::tan: stack.back() = std::tan(stack.back()); break;
        case Op::asin: stack.back() = std::asin(stack.back()); break;
        case Op::acos: stack.back() = std::acos(stack.back()); break;
        case Op::atan: stack.back() = std::atan(stack.back()); break;
        case Op::exp: stack.back() = std::exp(stack.back()); break;
        case Op::log: stack.back() = std::log(stack.back()); break;
        case Op::log2: stack.back() = std::log2(stack.back()); break;
        case Op::sqrt: stack.back() = std::sqrt(stack.back()); break;
        case Op::abs: stack.back() = std::abs(stack.back()); break;
        default: {
            const double rhs = pop();
            double &lhs = stack.back();
            switch (ins.op) {
            case Op::add: lhs += rhs; break;
            case Op::subtract: lhs -= rhs; break;
            case Op::multiply: lhs *= rhs; break;
            case Op::divide: lhs /= rhs; break;
            case Op::power: lhs = std::pow(lhs, rhs); break;
            case Op::atan2: lhs = std::atan2(lhs, rhs); break;
            case Op::min: lhs = std::min(lhs, rhs); break;
            case Op::max: lhs = std::max(lhs, rhs); break;
            default: break;
            }
        }
        }
    }
    return stack.back();
}

} // namespace hnpf
