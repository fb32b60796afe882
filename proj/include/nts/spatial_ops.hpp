#ifndef NTS_SPATIAL_OPS_HPP
#define NTS_SPATIAL_OPS_HPP

#include <array>
#include <vector>

#include "nts/grids.hpp"
#include "nts/linalg.hpp"
#include "nts/sparse.hpp"

namespace nts {

// Per-node 3-point stencils for the first (alpha) and second (beta) derivative
// on the nonuniform grid. Boundary rows: all zero at m = 0; at m = N_x the
// second derivative is zero and the first is the backward difference.
struct FdCoefficients {
    std::vector<std::array<double, 3>> alpha;  // (coeff at m-1, m, m+1)
    std::vector<std::array<double, 3>> beta;
};

FdCoefficients build_fd_coeffs(const SpatialGrid& grid);

// 1-D differentiation matrices assembled from the stencils.
SparseOperator fd_matrix_first(const SpatialGrid& grid);
SparseOperator fd_matrix_second(const SpatialGrid& grid);

// Semi-discrete diffusion matrix
//   D = 1/2 s11 I (x) Ix^2 D2 + s12 Ix D1 (x) Ix D1 + 1/2 s22 Ix^2 D2 (x) I
// acting on row-major vectors with m1 fast.
SparseOperator build_diffusion(const SpatialGrid& grid, const Mat2& sigma_w_sq);

enum class BoundaryPolicy {
    zero,                 // out-of-domain targets get an all-zero row
    linear_extrapolation, // 2-point linear extension from the nearest end nodes
    clamp,                // nearest end node
};

// 1-D interpolation matrix (targets x source_nodes), cubic tensor Lagrange on
// the 4-node window bracketing each target, shifted inward at the ends.
SparseOperator build_interpolation_1d(const std::vector<double>& source_nodes,
                                      const std::vector<double>& targets,
                                      BoundaryPolicy policy);

// Tensor-product operator A1 (x) A2 applied without materializing the
// Kronecker product: axis1 acts on the fast index m1, axis2 on m2.
struct TensorOperator {
    SparseOperator axis1;
    SparseOperator axis2;

    int out_size() const { return axis1.rows * axis2.rows; }
    int in_size() const { return axis1.cols * axis2.cols; }

    void apply(const double* in, double* out) const;
    std::vector<double> apply(const std::vector<double>& v) const;
    std::vector<double> dense() const;  // for small oracle comparisons
};

// 2-D interpolation from the tensor grid of source_nodes to the tensor grid of
// per-axis target coordinates.
TensorOperator build_interpolation(const std::vector<double>& source_nodes,
                                   const std::vector<double>& targets_axis1,
                                   const std::vector<double>& targets_axis2,
                                   BoundaryPolicy policy);

}  // namespace nts

#endif
