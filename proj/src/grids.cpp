#include "nts/grids.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace nts {

double SpatialGrid::phi(double xi) const {
    if (uniform()) return xi;  // uniform limit: phi is the identity on [0, x_max]
    const double xi_int = x_int / c;
    return xi <= xi_int ? c * xi : x_int + c * std::sinh(xi - xi_int);
}

double SpatialGrid::phi_inverse(double x) const {
    if (uniform()) return x;
    return x <= x_int ? x / c : x_int / c + std::asinh((x - x_int) / c);
}

namespace {

double fraction_for_c(double c, double x_int, double x_max) {
    return 1.0 / (1.0 + c / x_int * std::asinh((x_max - x_int) / c));
}

}  // namespace

SpatialGrid build_spatial_grid(int N_x, double x_max, double x_int, double F_target) {
    if (N_x < 2) throw std::invalid_argument("build_spatial_grid: N_x must be at least 2");
    if (!(x_int > 0.0 && x_int < x_max))
        throw std::invalid_argument("build_spatial_grid: need 0 < x_int < x_max");
    const double f_uniform = x_int / x_max;
    if (F_target < f_uniform - 1e-12 || F_target > 1.0)
        throw std::invalid_argument("build_spatial_grid: F_target not attainable");

    SpatialGrid grid;
    grid.N_x = N_x;
    grid.x_max = x_max;
    grid.x_int = x_int;

    if (F_target <= f_uniform + 1e-12) {
        grid.c = std::numeric_limits<double>::infinity();
        grid.achieved_F = f_uniform;
    } else {
        // F(c) decreases from 1 (c -> 0) to x_int/x_max (c -> inf); bisect.
        double lo = x_int * 1e-6, hi = x_int * 1e6;
        if (fraction_for_c(lo, x_int, x_max) < F_target || fraction_for_c(hi, x_int, x_max) > F_target)
            throw std::invalid_argument("build_spatial_grid: F_target outside bracket");
        for (int it = 0; it < 200; ++it) {
            const double mid = std::sqrt(lo * hi);  // geometric bisection over 12 decades
            (fraction_for_c(mid, x_int, x_max) > F_target ? lo : hi) = mid;
            if (hi / lo < 1.0 + 1e-14) break;
        }
        grid.c = 0.5 * (lo + hi);
        grid.achieved_F = fraction_for_c(grid.c, x_int, x_max);
    }

    const double xi_max = grid.phi_inverse(x_max);
    grid.nodes.resize(N_x + 1);
    for (int m = 0; m <= N_x; ++m) grid.nodes[m] = grid.phi(xi_max * m / N_x);
    grid.nodes[0] = 0.0;
    grid.nodes[N_x] = x_max;

    grid.widths.assign(N_x + 1, 0.0);
    for (int m = 1; m <= N_x; ++m) grid.widths[m] = grid.nodes[m] - grid.nodes[m - 1];

    grid.half_nodes.resize(N_x + 2);  // m+1/2 for m = -1 .. N_x
    for (int m = 0; m < N_x; ++m)
        grid.half_nodes[m + 1] = 0.5 * (grid.nodes[m] + grid.nodes[m + 1]);
    grid.half_nodes[0] = -grid.half_nodes[1];                          // x_{-1/2} = -x_{1/2}
    grid.half_nodes[N_x + 1] = 2.0 * x_max - grid.half_nodes[N_x];     // ghost above x_max

    grid.half_widths.resize(N_x + 1);
    for (int m = 0; m <= N_x; ++m)
        grid.half_widths[m] = grid.half_nodes[m + 1] - grid.half_nodes[m];
    return grid;
}

bool is_7_smooth(std::int64_t n) {
    if (n < 1) return false;
    for (const int p : {2, 3, 5, 7})
        while (n % p == 0) n /= p;
    return n == 1;
}

YGrids make_ygrids(int N_z, double h_z, int Ny_minus, int Ny_plus) {
    YGrids y;
    y.N_z = N_z;
    y.h_z = h_z;
    y.Ny_minus = Ny_minus;
    y.Ny_plus = Ny_plus;
    y.Ny_star = 0;
    y.y_out.resize(y.sharp_out());
    for (int m = -Ny_minus; m <= Ny_plus; ++m) y.y_out[m + Ny_minus] = std::exp(m * h_z);
    y.y_in.resize(y.sharp_in());
    for (int m = -N_z - Ny_minus; m <= N_z + Ny_plus - 1; ++m)
        y.y_in[m + N_z + Ny_minus] = std::exp((m + 0.5) * h_z);
    return y;
}

YGrids build_ygrids(int N_z, double h_z, double x_1, double x_max) {
    if (!(x_1 > 0.0)) throw std::invalid_argument("build_ygrids: x_1 must be positive");
    if (!(x_max > 1.0)) throw std::invalid_argument("build_ygrids: x_max must exceed 1");

    YGrids y;
    y.N_z = N_z;
    y.h_z = h_z;
    // Anchor the lower end well below the first spatial node: values at the
    // x = 0 boundary rows are linearly extrapolated from the lowest output
    // nodes, and an extrapolation gap of order x_1 loses an order of accuracy
    // there. x_1/16 keeps the residual gap O(h^2) at negligible extra cost.
    const int base_minus = static_cast<int>(std::ceil(-std::log(x_1 / 16.0) / h_z));
    const int base_plus = static_cast<int>(std::ceil(std::log(x_max) / h_z));

    int star = 0;
    while (!is_7_smooth(static_cast<std::int64_t>(2) * N_z + base_minus + base_plus + 2 * star))
        ++star;
    y.Ny_star = star;
    y.Ny_minus = base_minus + star;
    y.Ny_plus = base_plus + star;

    y.y_out.resize(y.sharp_out());
    for (int m = -y.Ny_minus; m <= y.Ny_plus; ++m)
        y.y_out[m + y.Ny_minus] = std::exp(m * h_z);

    y.y_in.resize(y.sharp_in());
    for (int m = -N_z - y.Ny_minus; m <= N_z + y.Ny_plus - 1; ++m)
        y.y_in[m + N_z + y.Ny_minus] = std::exp((m + 0.5) * h_z);
    return y;
}

std::array<std::vector<double>, 2> sl_departure_grid(const SpatialGrid& grid, Vec2 kappa_w,
                                                     double h_t) {
    if (!(h_t > 0.0)) throw std::invalid_argument("sl_departure_grid: h_t must be positive");
    std::array<std::vector<double>, 2> sl;
    for (int axis = 0; axis < 2; ++axis) {
        const double factor = std::exp(kappa_w[axis] * h_t);
        sl[axis].resize(grid.nodes.size());
        for (size_t m = 0; m < grid.nodes.size(); ++m) sl[axis][m] = grid.nodes[m] * factor;
        sl[axis][0] = 0.0;
    }
    return sl;
}

}  // namespace nts
