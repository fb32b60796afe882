#include <initializer_list>
#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "doctest.h"
#include "nts/linsolve.hpp"

using namespace nts;

namespace {

SparseOperator tridiagonal(int n, double lower, double diag, double upper) {
    SparseOperator::Builder b(n, n);
    for (int i = 0; i < n; ++i) {
        b.start_row();
        if (i > 0) b.add(i - 1, lower);
        b.add(i, diag);
        if (i < n - 1) b.add(i + 1, upper);
    }
    return b.finish();
}

SparseOperator random_diagonally_dominant(int n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<int> col(0, n - 1);
    std::vector<std::map<int, double>> rows(n);
    for (int i = 0; i < n; ++i) {
        double off_sum = 0.0;
        for (int k = 0; k < 6; ++k) {
            const int j = col(rng);
            if (j == i) continue;
            const double v = u(rng);
            rows[i][j] += v;
            off_sum += std::abs(v);
        }
        rows[i][i] = off_sum + 1.0 + std::abs(u(rng));
    }
    SparseOperator::Builder b(n, n);
    for (int i = 0; i < n; ++i) {
        b.start_row();
        for (const auto& [j, v] : rows[i]) b.add(j, v);
    }
    return b.finish();
}

// Dense Gaussian elimination with partial pivoting, as an independent oracle.
std::vector<double> dense_solve(const SparseOperator& a, std::vector<double> b) {
    const int n = a.rows;
    std::vector<double> m = a.dense();
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(m[i * n + k]) > std::abs(m[piv * n + k])) piv = i;
        for (int j = 0; j < n; ++j) std::swap(m[k * n + j], m[piv * n + j]);
        std::swap(b[k], b[piv]);
        for (int i = k + 1; i < n; ++i) {
            const double f = m[i * n + k] / m[k * n + k];
            for (int j = k; j < n; ++j) m[i * n + j] -= f * m[k * n + j];
            b[i] -= f * b[k];
        }
    }
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j) b[i] -= m[i * n + j] * b[j];
        b[i] /= m[i * n + i];
    }
    return b;
}

}  // namespace

TEST_CASE("ILU(0) of a diagonal matrix is exact") {
    SparseOperator::Builder b(4, 4);
    for (int i = 0; i < 4; ++i) {
        b.start_row();
        b.add(i, static_cast<double>(i + 2));
    }
    const SparseOperator a = b.finish();
    const IluFactors f = ilu0(a);
    const std::vector<double> v{2.0, -6.0, 8.0, 10.0};
    const std::vector<double> z = f.solve(v);
    for (int i = 0; i < 4; ++i) CHECK(z[i] == doctest::Approx(v[i] / (i + 2)));
    // Preconditioned solve converges immediately.
    const SolveResult r = bicgstab(a, &f, v, std::vector<double>(4, 0.0));
    CHECK(r.status == SolveStatus::converged);
    CHECK(r.iterations <= 1);
}

TEST_CASE("ILU(0) equals exact LU on tridiagonal matrices") {
    const int n = 30;
    const SparseOperator a = tridiagonal(n, -1.0, 2.5, -1.2);
    const IluFactors f = ilu0(a);
    std::vector<double> b(n);
    for (int i = 0; i < n; ++i) b[i] = std::sin(1.0 + i);
    // Tridiagonal LU has no fill outside the pattern, so M z = b is the exact solve.
    const std::vector<double> z = f.solve(b);
    const std::vector<double> expected = dense_solve(a, b);
    for (int i = 0; i < n; ++i) CHECK(z[i] == doctest::Approx(expected[i]).epsilon(1e-12));
}

TEST_CASE("ILU(0) rejects missing or zero pivots") {
    SparseOperator::Builder b(2, 2);
    b.start_row();
    b.add(1, 1.0);  // no diagonal in row 0
    b.start_row();
    b.add(0, 1.0);
    const SparseOperator a = b.finish();
    CHECK_THROWS(ilu0(a));
}

TEST_CASE("BiCGSTAB on the identity") {
    const SparseOperator a = SparseOperator::identity(5);
    const std::vector<double> b{1.0, -2.0, 3.0, 0.5, 0.0};
    const SolveResult r = bicgstab(a, nullptr, b, std::vector<double>(5, 0.0));
    CHECK(r.status == SolveStatus::converged);
    CHECK(r.iterations <= 1);
    for (int i = 0; i < 5; ++i) CHECK(r.x[i] == doctest::Approx(b[i]).epsilon(1e-14));
}

TEST_CASE("zero right-hand side returns zero immediately") {
    const SparseOperator a = tridiagonal(10, -1.0, 3.0, -1.0);
    const SolveResult r = bicgstab(a, nullptr, std::vector<double>(10, 0.0),
                                   std::vector<double>(10, 0.0));
    CHECK(r.status == SolveStatus::converged);
    CHECK(r.iterations == 0);
    for (const double x : r.x) CHECK(x == 0.0);
}

TEST_CASE("random diagonally dominant system matches the dense oracle") {
    const int n = 100;
    const SparseOperator a = random_diagonally_dominant(n, 11);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> b(n);
    for (double& x : b) x = u(rng);

    const IluFactors f = ilu0(a);
    const SolveResult r = bicgstab(a, &f, b, std::vector<double>(n, 0.0), 1e-14, 500);
    REQUIRE(r.status == SolveStatus::converged);
    CHECK(r.residual <= 1e-14);

    // Recomputed residual, from scratch.
    const std::vector<double> ax = a.apply(r.x);
    double rnorm = 0.0, bnorm = 0.0;
    for (int i = 0; i < n; ++i) {
        rnorm += (b[i] - ax[i]) * (b[i] - ax[i]);
        bnorm += b[i] * b[i];
    }
    CHECK(std::sqrt(rnorm / bnorm) <= 1e-13);

    const std::vector<double> expected = dense_solve(a, b);
    for (int i = 0; i < n; ++i) CHECK(r.x[i] == doctest::Approx(expected[i]).epsilon(1e-11));
}

TEST_CASE("preconditioning reduces the iteration count") {
    const int n = 400;
    // Stiff tridiagonal system (discrete Laplacian plus small shift).
    const SparseOperator a = tridiagonal(n, -1.0, 2.01, -1.0);
    std::vector<double> b(n);
    for (int i = 0; i < n; ++i) b[i] = std::cos(0.1 * i);
    const IluFactors f = ilu0(a);
    const SolveResult plain = bicgstab(a, nullptr, b, std::vector<double>(n, 0.0), 1e-12, 5000);
    const SolveResult prec = bicgstab(a, &f, b, std::vector<double>(n, 0.0), 1e-12, 5000);
    REQUIRE(plain.status == SolveStatus::converged);
    REQUIRE(prec.status == SolveStatus::converged);
    CHECK(prec.iterations < plain.iterations);
}

TEST_CASE("solver is deterministic") {
    const int n = 80;
    const SparseOperator a = random_diagonally_dominant(n, 3);
    std::vector<double> b(n);
    for (int i = 0; i < n; ++i) b[i] = std::sin(0.3 * i);
    const IluFactors f = ilu0(a);
    const SolveResult r1 = bicgstab(a, &f, b, std::vector<double>(n, 0.0));
    const SolveResult r2 = bicgstab(a, &f, b, std::vector<double>(n, 0.0));
    CHECK(r1.iterations == r2.iterations);
    for (int i = 0; i < n; ++i) CHECK(r1.x[i] == r2.x[i]);
}
