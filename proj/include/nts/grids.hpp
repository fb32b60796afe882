#ifndef NTS_GRIDS_HPP
#define NTS_GRIDS_HPP

#include <cstdint>
#include <vector>

#include "nts/linalg.hpp"

namespace nts {

// 1-D spatial grid on [0, x_max]: uniform on [0, x_int], sinh-stretched above.
// The same grid is used in both spatial dimensions.
struct SpatialGrid {
    int N_x = 0;
    double x_max = 0.0;
    double x_int = 0.0;
    double c = 0.0;          // stretching parameter; +inf marks the uniform limit
    double achieved_F = 0.0; // asymptotic fraction of nodes in [0, x_int]

    std::vector<double> nodes;        // x_0 = 0 .. x_{N_x} = x_max
    std::vector<double> widths;       // widths[m] = x_m - x_{m-1}, m = 1..N_x (index m)
    std::vector<double> half_nodes;   // x_{m+1/2}, m = -1..N_x (stored shifted by 1)
    std::vector<double> half_widths;  // h_{x,m+1/2}, m = 0..N_x

    bool uniform() const { return !std::isfinite(c); }
    double phi(double xi) const;
    double phi_inverse(double x) const;
    double half_node(int m_plus) const { return half_nodes[m_plus + 1]; }  // m_plus in [-1, N_x]
};

// Log-spaced grids for the circulant identity. Per-axis nodes:
//   y_out: e^{m h_z},        m = -Ny_minus .. Ny_plus
//   y_in:  e^{(m+1/2) h_z},  m = -N_z-Ny_minus .. N_z+Ny_plus-1
// Ny_minus may be negative when the anchor of the lower extent exceeds 1.
struct YGrids {
    int N_z = 0;
    double h_z = 0.0;
    int Ny_minus = 0;
    int Ny_plus = 0;
    int Ny_star = 0;

    std::vector<double> y_out;  // sharp_out values
    std::vector<double> y_in;   // sharp_in values

    int sharp_in() const { return 2 * N_z + Ny_minus + Ny_plus; }
    int sharp_out() const { return Ny_minus + Ny_plus + 1; }
};

bool is_7_smooth(std::int64_t n);

// Solves the stretching parameter c so that the asymptotic node fraction in
// [0, x_int] equals F_target; F_target == x_int/x_max selects the uniform grid.
SpatialGrid build_spatial_grid(int N_x, double x_max, double x_int, double F_target);

// x_1 is the first positive spatial node; the output grid extends down to
// x_1/16 so the x = 0 boundary rows extrapolate over a short gap. Ny_star is
// the minimal n >= 0 making sharp_in 7-smooth (n added to both extents).
YGrids build_ygrids(int N_z, double h_z, double x_1, double x_max);

// Y-grids with explicitly chosen extents (used for small fixtures).
YGrids make_ygrids(int N_z, double h_z, int Ny_minus, int Ny_plus);

// Departure nodes of the semi-Lagrangian transport, per axis:
// x^SL_m = x_m e^{kappa_w^(i) h_t}.
std::array<std::vector<double>, 2> sl_departure_grid(const SpatialGrid& grid, Vec2 kappa_w,
                                                     double h_t);

}  // namespace nts

#endif
