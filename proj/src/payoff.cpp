#include "nts/payoff.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nts {
namespace {

// int_0^inf int_0^inf (u - s - t)_+ ds dt = u^3/6 for u > 0.
double corner_integral(double u) { return u > 0.0 ? u * u * u / 6.0 : 0.0; }

}  // namespace

double payoff_eval(const PayoffSpec& spec, Vec2 x) {
    if (x[0] < 0.0 || x[1] < 0.0) throw std::domain_error("payoff_eval: negative asset value");
    return std::max(spec.K - 0.5 * (x[0] + x[1]), 0.0);
}

double cell_average(const PayoffSpec& spec, double a1, double b1, double a2, double b2) {
    if (!(b1 > a1 && b2 > a2)) throw std::invalid_argument("cell_average: degenerate cell");
    // Integral of (2K - x1 - x2)_+ / 2 by inclusion-exclusion of the corner
    // antiderivative; exact for the piecewise-linear integrand.
    const double twoK = 2.0 * spec.K;
    const double integral = corner_integral(twoK - a1 - a2) - corner_integral(twoK - b1 - a2) -
                            corner_integral(twoK - a1 - b2) + corner_integral(twoK - b1 - b2);
    return integral / (2.0 * (b1 - a1) * (b2 - a2));
}

bool cell_straddles_kink(const PayoffSpec& spec, const SpatialGrid& grid, int m1, int m2) {
    // Half-open cell [x_{m1-1/2}, x_{m1+1/2}) x [x_{m2-1/2}, x_{m2+1/2}).
    const double lo = grid.half_node(m1 - 1) + grid.half_node(m2 - 1);
    const double hi = grid.half_node(m1) + grid.half_node(m2);
    const double twoK = 2.0 * spec.K;
    return lo <= twoK && twoK < hi;
}

std::vector<double> initial_vector(const PayoffSpec& spec, const SpatialGrid& grid) {
    const int n = grid.N_x + 1;
    std::vector<double> v(static_cast<size_t>(n) * n);
    for (int m2 = 0; m2 < n; ++m2) {
        for (int m1 = 0; m1 < n; ++m1) {
            double value;
            if (cell_straddles_kink(spec, grid, m1, m2)) {
                value = cell_average(spec, grid.half_node(m1 - 1), grid.half_node(m1),
                                     grid.half_node(m2 - 1), grid.half_node(m2));
            } else {
                value = payoff_eval(spec, {grid.nodes[m1], grid.nodes[m2]});
            }
            v[m1 + static_cast<size_t>(n) * m2] = value;
        }
    }
    return v;
}

}  // namespace nts
