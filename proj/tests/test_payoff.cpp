#include <initializer_list>
#include <cmath>

#include "doctest.h"
#include "nts/payoff.hpp"

using namespace nts;

namespace {
const PayoffSpec kPut{PayoffSpec::Kind::put_on_average, 100.0};
}

TEST_CASE("pointwise payoff") {
    CHECK(payoff_eval(kPut, {0.0, 0.0}) == 100.0);
    CHECK(payoff_eval(kPut, {100.0, 100.0}) == 0.0);
    CHECK(payoff_eval(kPut, {90.0, 100.0}) == doctest::Approx(5.0));
    CHECK(payoff_eval(kPut, {300.0, 10.0}) == 0.0);
    CHECK_THROWS(payoff_eval(kPut, {-1.0, 5.0}));
}

TEST_CASE("cell average: exact values") {
    // Cell strictly in the money: average equals the payoff at the centroid
    // (the integrand is linear there).
    CHECK(cell_average(kPut, 10.0, 20.0, 30.0, 40.0) ==
          doctest::Approx(100.0 - 0.5 * (15.0 + 35.0)).epsilon(1e-13));
    // Cell strictly out of the money.
    CHECK(cell_average(kPut, 150.0, 160.0, 150.0, 160.0) == doctest::Approx(0.0));
    // Kink-straddling cell centered on the non-smoothness line; reference value
    // 5/6 computed in exact arithmetic.
    CHECK(cell_average(kPut, 95.0, 105.0, 95.0, 105.0) == doctest::Approx(5.0 / 6.0).epsilon(1e-13));
    CHECK_THROWS(cell_average(kPut, 10.0, 10.0, 0.0, 1.0));
}

TEST_CASE("cell average converges to the point value as cells shrink") {
    const double x1 = 99.0, x2 = 101.0;  // on the kink line
    double prev_err = 1e9;
    for (const double h : {4.0, 2.0, 1.0, 0.5}) {
        const double avg = cell_average(kPut, x1 - h, x1 + h, x2 - h, x2 + h);
        const double err = std::abs(avg - payoff_eval(kPut, {x1, x2}));
        CHECK(err < prev_err + 1e-15);
        prev_err = err;
    }
    CHECK(prev_err < 0.25);
}

TEST_CASE("initial vector uses cell averages exactly on straddling cells") {
    const SpatialGrid grid = build_spatial_grid(30, 600.0, 250.0, 0.65);
    const std::vector<double> v = initial_vector(kPut, grid);
    REQUIRE(v.size() == 31u * 31u);
    int straddling = 0;
    for (int m2 = 0; m2 <= 30; ++m2)
        for (int m1 = 0; m1 <= 30; ++m1) {
            const double value = v[m1 + 31 * m2];
            const double point = payoff_eval(kPut, {grid.nodes[m1], grid.nodes[m2]});
            if (cell_straddles_kink(kPut, grid, m1, m2)) {
                ++straddling;
                const double avg = cell_average(kPut, grid.half_node(m1 - 1), grid.half_node(m1),
                                                grid.half_node(m2 - 1), grid.half_node(m2));
                CHECK(value == doctest::Approx(avg));
            } else {
                CHECK(value == point);
            }
            CHECK(value >= 0.0);
            CHECK(value <= kPut.K);
        }
    CHECK(straddling > 0);  // the kink line must cross the grid
}

TEST_CASE("straddle predicate partitions the kink line") {
    const SpatialGrid grid = build_spatial_grid(25, 600.0, 250.0, 0.65);
    // Cells are closed, so the kink line can touch at most two adjacent cells
    // per row; straddling cells must be contiguous.
    for (int m2 = 0; m2 <= 25; ++m2) {
        int count = 0, first = -1, last = -1;
        for (int m1 = 0; m1 <= 25; ++m1)
            if (cell_straddles_kink(kPut, grid, m1, m2)) {
                if (first < 0) first = m1;
                last = m1;
                ++count;
            }
        CHECK(count <= 2);
        if (count > 0) CHECK(last - first == count - 1);
    }
}
