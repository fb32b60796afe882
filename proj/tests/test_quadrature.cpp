#include <initializer_list>
#include <cmath>

#include "doctest.h"
#include "nts/quadrature.hpp"

using namespace nts;

TEST_CASE("z-grid geometry") {
    const NtsModel m = preset("VG1");
    const auto [grid, part] = build_zgrid(m, 16, 1.6);
    CHECK(grid.h_z == doctest::Approx(0.1));
    CHECK(grid.size() == 32);
    CHECK(grid.center_coord(0) == doctest::Approx(0.05));
    CHECK(grid.center_coord(-1) == doctest::Approx(-0.05));
    const Rect cell = grid.cell(-16, 15);
    CHECK(cell.x0 == doctest::Approx(-1.6));
    CHECK(cell.y1 == doctest::Approx(1.6));
    CHECK(part.z_max_I == doctest::Approx(0.2));
    CHECK(part.z_max_II == doctest::Approx(std::sqrt(0.1) * 1.6));
    CHECK(part.z_max_III == doctest::Approx(1.6));

    CHECK_THROWS(build_zgrid(m, 2, 1.0));
}

TEST_CASE("automatic truncation radius matches the density level set") {
    const NtsModel m = preset("VG1");
    const auto [grid, part] = build_zgrid(m, 16);
    CHECK(grid.z_max == doctest::Approx(find_truncation_radius(m, 1e-8)).epsilon(1e-9));
}

TEST_CASE("cell moment is additive and positive") {
    const NtsModel m = preset("VG1");
    const Rect whole{0.2, 0.4, 0.1, 0.3};
    const Rect left{0.2, 0.3, 0.1, 0.3};
    const Rect right{0.3, 0.4, 0.1, 0.3};
    const double a = cell_moment(m, whole);
    const double b = cell_moment(m, left) + cell_moment(m, right);
    CHECK(a > 0.0);
    CHECK(a == doctest::Approx(b).epsilon(1e-8));
    CHECK_THROWS(cell_moment(m, Rect{-0.1, 0.1, -0.1, 0.1}));
}

TEST_CASE("R^I second moment is symmetric positive semidefinite") {
    for (const char* name : {"VG0", "VG1", "NIG1"}) {
        CAPTURE(name);
        const NtsModel m = preset(name);
        const auto [grid, part] = build_zgrid(m, 16);
        const Mat2 si = second_moment_RI(m, part);
        CHECK(si[0][1] == doctest::Approx(si[1][0]));
        const auto eig = sym_eigenvalues(si);
        CHECK(eig[0] >= -1e-14 * eig[1]);
        CHECK(eig[1] > 0.0);
    }
}

TEST_CASE("scheme weights: positivity, R^I zero block, corrected coefficients") {
    const NtsModel m = preset("VG1");
    const auto [grid, part] = build_zgrid(m, 24);
    const QuadratureScheme scheme = build_scheme(m, grid, part);

    double sum_w = 0.0;
    Vec2 jump_mean{};
    for (int l2 = -24; l2 < 24; ++l2)
        for (int l1 = -24; l1 < 24; ++l1) {
            const double w = scheme.w(l1, l2);
            CHECK(w >= 0.0);
            const Vec2 c = grid.center(l1, l2);
            if (std::max(std::abs(c[0]), std::abs(c[1])) <= part.z_max_I) CHECK(w == 0.0);
            sum_w += w;
            jump_mean[0] += w * std::expm1(c[0]);
            jump_mean[1] += w * std::expm1(c[1]);
        }
    CHECK(scheme.r_w == doctest::Approx(m.r + sum_w).epsilon(1e-12));
    CHECK(scheme.kappa_w[0] == doctest::Approx(m.r - jump_mean[0]).epsilon(1e-10));
    CHECK(scheme.kappa_w[1] == doctest::Approx(m.r - jump_mean[1]).epsilon(1e-10));

    // sigma_w sigma_w' - sigma sigma' = int_{R^I} z z' ell(dz) is PSD.
    const Mat2 diff = scheme.sigma_w_sq - m.sigma_sigma_t();
    CHECK(sym_eigenvalues(diff)[0] >= 0.0);
}

TEST_CASE("discrete second moment approximates the variance of L(1)") {
    // sigma_w sigma_w' + sum_l w_l z_l z_l' should approach int z z' ell(dz),
    // which equals V[L(1)] for the compensated pure-jump process.
    const NtsModel m = preset("VG1");
    const auto [grid, part] = build_zgrid(m, 48);
    const QuadratureScheme scheme = build_scheme(m, grid, part);
    Mat2 total = scheme.sigma_w_sq;
    for (int l2 = -48; l2 < 48; ++l2)
        for (int l1 = -48; l1 < 48; ++l1) {
            const Vec2 c = grid.center(l1, l2);
            total = total + scheme.w(l1, l2) * outer(c, c);
        }
    const Mat2 expected = variance_of_L(m, 1.0);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(total[i][j] == doctest::Approx(expected[i][j]).epsilon(0.02));
}
