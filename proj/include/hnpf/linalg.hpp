#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hnpf {

using Vector = std::vector<double>;

/// Dense row-major matrix. Only what the discriminator and the network need.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill)
    {
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }

    friend bool operator==(const Matrix &, const Matrix &) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// AᵀA.
Matrix gram(const Matrix &a);

/// Determinant of a square matrix. Closed-form cofactor expansion up to 3×3,
/// LU with partial pivoting above that.
double determinant(const Matrix &a);

/// Determinant via LU with partial pivoting regardless of size.
double lu_determinant(Matrix a);

} // namespace hnpf
