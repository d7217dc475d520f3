#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "hnpf/linalg.hpp"
#include "hnpf/rng.hpp"

using namespace hnpf;

namespace {

// Leibniz expansion: sum over permutations of sign(σ) Π a[i][σ(i)].
double leibniz(const Matrix &a)
{
    const std::size_t n = a.rows();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    double total = 0.0;
    do {
        std::size_t inversions = 0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                inversions += perm[i] > perm[j] ? 1 : 0;
            }
        }
        double term = inversions % 2 == 0 ? 1.0 : -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            term *= a(i, perm[i]);
        }
        total += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

Matrix random_matrix(Rng &rng, std::size_t rows, std::size_t cols)
{
    Matrix m(rows, cols);
    for (double &v : m.data()) {
        v = rng.uniform(-2.0, 2.0);
    }
    return m;
}

} // namespace

TEST_CASE("determinant agrees with the permutation expansion")
{
    Rng rng(7);
    for (std::size_t n = 1; n <= 6; ++n) {
        for (int trial = 0; trial < 50; ++trial) {
            const Matrix a = random_matrix(rng, n, n);
            const double expected = leibniz(a);
            CHECK(determinant(a) == doctest::Approx(expected).epsilon(1e-10).scale(1.0));
            CHECK(lu_determinant(a) == doctest::Approx(expected).epsilon(1e-10).scale(1.0));
        }
    }
}

TEST_CASE("empty matrix has determinant one")
{
    CHECK(determinant(Matrix(0, 0)) == 1.0);
}

TEST_CASE("singular matrices give zero")
{
    Matrix a(4, 4);
    for (std::size_t c = 0; c < 4; ++c) {
        a(0, c) = static_cast<double>(c + 1);
        a(1, c) = 2.0 * static_cast<double>(c + 1);
        a(2, c) = static_cast<double>(c * c);
        a(3, c) = 1.0;
    }
    CHECK(std::abs(determinant(a)) < 1e-12);

    Matrix zero_col(5, 5, 1.0);
    for (std::size_t r = 0; r < 5; ++r) {
        zero_col(r, 2) = 0.0;
    }
    CHECK(lu_determinant(zero_col) == 0.0);
}

TEST_CASE("gram is AᵀA and positive semidefinite")
{
    Rng rng(3);
    const Matrix a = random_matrix(rng, 5, 3);
    const Matrix g = gram(a);
    REQUIRE(g.rows() == 3);
    REQUIRE(g.cols() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            double s = 0.0;
            for (std::size_t r = 0; r < 5; ++r) {
                s += a(r, i) * a(r, j);
            }
            CHECK(g(i, j) == doctest::Approx(s).epsilon(1e-14));
            CHECK(g(i, j) == g(j, i));
        }
    }
    CHECK(determinant(g) >= 0.0);
}
