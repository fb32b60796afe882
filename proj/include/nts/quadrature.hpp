#ifndef NTS_QUADRATURE_HPP
#define NTS_QUADRATURE_HPP

#include <vector>

#include "nts/model.hpp"

namespace nts {

struct Rect {
    double x0, x1, y0, y1;
};

// Uniform cell grid tiling the square ||z||_inf <= z_max_III with (2 N_z)^2 cells.
struct ZGrid {
    int N_z = 0;
    double h_z = 0.0;
    double z_max = 0.0;  // z_max_III

    int size() const { return 2 * N_z; }  // cells per direction
    // Cell indices l in [-N_z, N_z-1] per axis; flat index uses a = l + N_z.
    double center_coord(int l) const { return (l + 0.5) * h_z; }
    Vec2 center(int l1, int l2) const { return {center_coord(l1), center_coord(l2)}; }
    Rect cell(int l1, int l2) const {
        return {l1 * h_z, (l1 + 1) * h_z, l2 * h_z, (l2 + 1) * h_z};
    }
};

struct RegionPartition {
    double z_max_I = 0.0;    // = 2 h_z
    double z_max_II = 0.0;   // = sqrt(0.1) z_max_III
    double z_max_III = 0.0;
};

// Discretized integral operator: weight matrix Omega plus the corrected
// diffusion/convection/reaction coefficients.
struct QuadratureScheme {
    int N_z = 0;
    std::vector<double> omega;  // (2N_z)^2, row-major with l1 fast: omega[(l1+N_z) + 2N_z*(l2+N_z)]
    Mat2 sigma_w_sq;            // sigma_w sigma_w' = sigma sigma' + int_{R^I} z z' ell(dz)
    Vec2 kappa_w;               // kappa_w^(i) = r - sum omega (e^{z^(i)} - 1)
    double r_w = 0.0;           // r + sum omega
    Mat2 second_moment_RI;

    double& w(int l1, int l2) { return omega[(l1 + N_z) + 2 * N_z * (l2 + N_z)]; }
    double w(int l1, int l2) const { return omega[(l1 + N_z) + 2 * N_z * (l2 + N_z)]; }
};

// Builds the z-grid and the three-region partition. z_max <= 0 means "find the
// truncation radius where ell drops to `level`".
std::pair<ZGrid, RegionPartition> build_zgrid(const NtsModel& model, int N_z,
                                              double z_max = 0.0, double level = 1e-8);

// int_cell ||z||^2 ell(dz) (Euclidean norm), adaptive tensor quadrature with
// subdivision toward the cell corner nearest the origin. The cell must not
// touch the origin.
double cell_moment(const NtsModel& model, const Rect& cell, double rel_tol = 1e-10);

// int_{R^I} z z' ell(dz) over the square ||z||_inf <= z_max_I, summed over
// dyadic rings shrinking onto the singularity.
Mat2 second_moment_RI(const NtsModel& model, const RegionPartition& partition,
                      double rel_tol = 1e-8);

QuadratureScheme build_scheme(const NtsModel& model, const ZGrid& zgrid,
                              const RegionPartition& partition);

}  // namespace nts

#endif
