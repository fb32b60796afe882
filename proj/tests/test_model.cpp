#include <initializer_list>
#include <cmath>
#include <complex>

#include "doctest.h"
#include "nts/model.hpp"

using namespace nts;

TEST_CASE("rho metric of the VG0 parameter set") {
    const NtsModel m = preset("VG0");
    const RhoMetric metric = rho_metric(m);
    CHECK(metric.determinant == doctest::Approx(0.0108).epsilon(1e-14));
    // ||eta||_rho^2 = 7/27, exact rational value
    CHECK(metric.norm_sq(m.eta) == doctest::Approx(7.0 / 27.0).epsilon(1e-13));
}

TEST_CASE("all presets validate") {
    for (const char* name : {"VG0", "VG1", "NIG0", "NIG1"}) CHECK_NOTHROW(validate(preset(name)));
    CHECK_THROWS(preset("XYZ"));
}

TEST_CASE("invalid parameters are rejected") {
    NtsModel m = preset("VG0");
    m.alpha = 1.0;
    CHECK_THROWS(validate(m));
    m = preset("VG0");
    m.delta = 0.0;
    CHECK_THROWS(validate(m));
    m = preset("VG0");
    m.rho[0][1] = 0.5;  // not symmetric
    CHECK_THROWS(validate(m));
    m = preset("VG0");
    m.rho = {{{0.09, 0.2}, {0.2, 0.16}}};  // indefinite
    CHECK_THROWS(validate(m));
    m = preset("VG0");
    m.lambda = 0.1;  // decay rate too slow for finite second exponential moment
    CHECK_THROWS(validate(m));
}

TEST_CASE("Levy density reference value and symmetry structure") {
    const NtsModel m = preset("VG0");
    // Reference computed with 50-digit arithmetic from the closed form.
    CHECK(levy_density(m, {0.1, 0.1}) == doctest::Approx(17.954565975029667).epsilon(1e-11));
    // The density is singular at the origin.
    CHECK_THROWS(levy_density(m, {0.0, 0.0}));
    // Tilt asymmetry: with negative eta, negative jumps are more likely.
    CHECK(levy_density(m, {-0.3, -0.3}) > levy_density(m, {0.3, 0.3}));
    // Positivity away from the origin.
    for (const double s : {0.05, 0.4, 2.0}) CHECK(levy_density(m, {s, -s}) > 0.0);
}

TEST_CASE("density cache matches the free function") {
    const NtsModel m = preset("NIG1");
    const LevyDensity density(m);
    for (const double s : {0.02, 0.3, 1.1}) {
        CHECK(density({s, 0.5 * s}) == doctest::Approx(levy_density(m, {s, 0.5 * s})));
    }
}

TEST_CASE("variance of L reproduces the published moment table") {
    struct Row {
        const char* name;
        double std1, std2, corr;
    };
    const Row rows[] = {
        {"VG0", 0.3162, 0.4472, 0.5656},
        {"VG1", 0.1080, 0.1707, 0.1807},
        {"NIG0", 0.1958, 0.1830, 0.8417},
        {"NIG1", 0.1943, 0.2352, 0.5975},
    };
    for (const Row& row : rows) {
        CAPTURE(row.name);
        const Mat2 v = variance_of_L(preset(row.name), 1.0);
        const double s1 = std::sqrt(v[0][0]);
        const double s2 = std::sqrt(v[1][1]);
        CHECK(std::abs(s1 - row.std1) < 1e-4);
        CHECK(std::abs(s2 - row.std2) < 1e-4);
        CHECK(std::abs(v[0][1] / (s1 * s2) - row.corr) < 1e-4);
    }
}

TEST_CASE("variance scales linearly in time") {
    const NtsModel m = preset("NIG0");
    const Mat2 v1 = variance_of_L(m, 1.0);
    const Mat2 v2 = variance_of_L(m, 2.0);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(v2[i][j] == doctest::Approx(2.0 * v1[i][j]));
}

TEST_CASE("characteristic exponent reference value and basic identities") {
    const NtsModel m = preset("VG0");
    const std::complex<double> psi = characteristic_exponent(m, {1.0, 0.0});
    CHECK(psi.real() == doctest::Approx(-0.048574698249403555).epsilon(1e-12));
    CHECK(psi.imag() == doctest::Approx(0.004596724484957193).epsilon(1e-12));
    // psi(0) = 0
    const std::complex<double> zero = characteristic_exponent(m, {0.0, 0.0});
    CHECK(std::abs(zero) < 1e-15);
    // Hermitian symmetry: psi(-x) = conj(psi(x)) for real x.
    const std::complex<double> neg = characteristic_exponent(m, {-1.0, 0.0});
    CHECK(neg.real() == doctest::Approx(psi.real()).epsilon(1e-13));
    CHECK(neg.imag() == doctest::Approx(-psi.imag()).epsilon(1e-13));
}

TEST_CASE("martingale exponent is real and finite for every preset") {
    for (const char* name : {"VG0", "VG1", "NIG0", "NIG1"}) {
        CAPTURE(name);
        const NtsModel m = preset(name);
        for (int i = 0; i < 2; ++i) {
            const double kappa = martingale_exponent(m, i);
            CHECK(std::isfinite(kappa));
            // kappa equals psi at the purely imaginary point; cross-check the
            // imaginary part vanishes there.
            std::array<std::complex<double>, 2> x{};
            x[i] = std::complex<double>(0.0, -1.0);
            CHECK(std::abs(characteristic_exponent(m, x).imag()) < 1e-12);
        }
        CHECK_THROWS(martingale_exponent(m, 2));
    }
}

TEST_CASE("tail constants and the radial bound near the origin") {
    for (const char* name : {"VG0", "VG1", "NIG0", "NIG1"}) {
        CAPTURE(name);
        const NtsModel m = preset(name);
        const TailConstants tc = tail_constants(m);
        CHECK(tc.A_ell == doctest::Approx(2.0 * m.alpha));
        CHECK(tc.B_ell > 0.0);
        CHECK(tc.C_ell(0.0) == doctest::Approx(tc.c_coeff));
        CHECK(tc.C_ell(1.0) > tc.C_ell(0.1));

        // ell(z) ||z||_rho^{A_ell + 2} <= C_ell(h) on ||z||_rho <= h
        const RhoMetric metric = rho_metric(m);
        const LevyDensity density(m);
        const double h = 0.5;
        for (int k = 1; k <= 40; ++k) {
            const double angle = 2.0 * M_PI * k / 41.0;
            Vec2 z{std::cos(angle), std::sin(angle)};
            const double scale = h * (k % 5 + 1) / (5.0 * metric.norm(z));
            z = {scale * z[0], scale * z[1]};
            const double s = metric.norm(z);
            CHECK(density(z) * std::pow(s, tc.A_ell + 2.0) <= tc.C_ell(h) * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("truncation radius brackets the level set") {
    const NtsModel m = preset("VG1");
    const double level = 1e-8;
    const double s = find_truncation_radius(m, level);
    CHECK(s > 0.0);
    // Just inside, some boundary point exceeds the level; just outside, none do.
    const LevyDensity density(m);
    double inside_max = 0.0, outside_max = 0.0;
    for (int k = 0; k < 720; ++k) {
        const double t = -1.0 + 2.0 * k / 719.0;
        for (const double f : {0.999, 1.001}) {
            const double edge = f * s;
            double& target = f < 1.0 ? inside_max : outside_max;
            target = std::max(target, density({edge, t * edge}));
            target = std::max(target, density({t * edge, edge}));
            target = std::max(target, density({-edge, t * edge}));
            target = std::max(target, density({t * edge, -edge}));
        }
    }
    CHECK(inside_max >= level * (1.0 - 1e-6));
    CHECK(outside_max <= level * (1.0 + 1e-6));
}
