#include "hnpf/linalg.hpp"

#include <cmath>
#include <utility>

#include "hnpf/errors.hpp"

namespace hnpf {

Matrix gram(const Matrix &a)
{
    const std::size_t n = a.cols();
    Matrix g(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            double s = 0.0;
            for (std::size_t r = 0; r < a.rows(); ++r) {
                s += a(r, i) * a(r, j);
            }
            g(i, j) = s;
            g(j, i) = s;
        }
    }
    return g;
}

double lu_determinant(Matrix a)
{
    if (a.rows() != a.cols()) {
        throw InputError("determinant of a non-square matrix");
    }
    const std::size_t n = a.rows();
    double det = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        double best = std::abs(a(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a(r, col)) > best) {
                best = std::abs(a(r, col));
                pivot = r;
            }
        }
        if (best == 0.0) {
            return 0.0;
        }
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c) {
                std::swap(a(col, c), a(pivot, c));
            }
            det = -det;
        }
        const double diag = a(col, col);
        det *= diag;
        for (std::size_t r = col + 1; r < n; ++r) {
            const double factor = a(r, col) / diag;
            if (factor == 0.0) {
                continue;
            }
            for (std::size_t c = col + 1; c < n; ++c) {
                a(r, c) -= factor * a(col, c);
            }
        }
    }
    return det;
}

double determinant(const Matrix &a)
{
    if (a.rows() != a.cols()) {
        throw InputError("determinant of a non-square matrix");
    }
    switch (a.rows()) {
    case 0:
        return 1.0;
    case 1:
        return a(0, 0);
    case 2:
        return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    case 3:
        return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1))
               - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
               + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
    default:
        return lu_determinant(a);
    }
}

} // namespace hnpf
