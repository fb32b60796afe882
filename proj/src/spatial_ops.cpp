#include "nts/spatial_ops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nts {

FdCoefficients build_fd_coeffs(const SpatialGrid& grid) {
    const int n = grid.N_x;
    if (n < 2) throw std::invalid_argument("build_fd_coeffs: N_x must be at least 2");
    FdCoefficients fd;
    fd.alpha.assign(n + 1, {0.0, 0.0, 0.0});
    fd.beta.assign(n + 1, {0.0, 0.0, 0.0});
    for (int m = 1; m < n; ++m) {
        const double hm = grid.widths[m];        // x_m - x_{m-1}
        const double hp = grid.widths[m + 1];    // x_{m+1} - x_m
        fd.alpha[m] = {-hp / (hm * (hm + hp)), (hp - hm) / (hm * hp), hm / (hp * (hm + hp))};
        fd.beta[m] = {2.0 / (hm * (hm + hp)), -2.0 / (hm * hp), 2.0 / (hp * (hm + hp))};
    }
    // m = 0: the degenerate coefficients at x = 0 make both rows vanish.
    // m = N_x: linear behaviour assumed, first-order backward difference.
    const double h_last = grid.widths[n];
    fd.alpha[n] = {-1.0 / h_last, 1.0 / h_last, 0.0};
    return fd;
}

namespace {

SparseOperator stencil_matrix(const std::vector<std::array<double, 3>>& coeffs) {
    const int n = static_cast<int>(coeffs.size());
    SparseOperator::Builder builder(n, n);
    for (int m = 0; m < n; ++m) {
        builder.start_row();
        if (m > 0) builder.add(m - 1, coeffs[m][0]);
        builder.add(m, coeffs[m][1]);
        if (m < n - 1) builder.add(m + 1, coeffs[m][2]);
    }
    return builder.finish();
}

SparseOperator scale_rows(const SparseOperator& a, const std::vector<double>& d, int power) {
    SparseOperator out = a;
    for (int i = 0; i < out.rows; ++i) {
        const double s = std::pow(d[i], power);
        for (int k = out.row_ptr[i]; k < out.row_ptr[i + 1]; ++k) out.values[k] *= s;
    }
    return out;
}

}  // namespace

SparseOperator fd_matrix_first(const SpatialGrid& grid) {
    return stencil_matrix(build_fd_coeffs(grid).alpha);
}

SparseOperator fd_matrix_second(const SpatialGrid& grid) {
    return stencil_matrix(build_fd_coeffs(grid).beta);
}

SparseOperator build_diffusion(const SpatialGrid& grid, const Mat2& sigma_w_sq) {
    if (!is_symmetric(sigma_w_sq))
        throw std::invalid_argument("build_diffusion: sigma_w_sq must be symmetric");
    const SparseOperator d1 = fd_matrix_first(grid);
    const SparseOperator d2 = fd_matrix_second(grid);
    const SparseOperator ix_d1 = scale_rows(d1, grid.nodes, 1);
    const SparseOperator ix2_d2 = scale_rows(d2, grid.nodes, 2);
    const SparseOperator eye = SparseOperator::identity(grid.N_x + 1);

    SparseOperator d = kron(eye, ix2_d2);  // axis-1 second derivative
    d = add(d, kron(ix_d1, ix_d1), 0.5 * sigma_w_sq[0][0], sigma_w_sq[0][1]);
    d = add(d, kron(ix2_d2, eye), 1.0, 0.5 * sigma_w_sq[1][1]);
    return d;
}

SparseOperator build_interpolation_1d(const std::vector<double>& source_nodes,
                                      const std::vector<double>& targets,
                                      BoundaryPolicy policy) {
    const int n_src = static_cast<int>(source_nodes.size());
    if (n_src < 2) throw std::invalid_argument("build_interpolation_1d: need at least 2 nodes");
    const double lo = source_nodes.front();
    const double hi = source_nodes.back();
    const int stencil = std::min(4, n_src);

    SparseOperator::Builder builder(static_cast<int>(targets.size()), n_src);
    for (const double t : targets) {
        builder.start_row();
        if (t < lo || t > hi) {
            switch (policy) {
                case BoundaryPolicy::zero:
                    break;
                case BoundaryPolicy::linear_extrapolation: {
                    const int i0 = t < lo ? 0 : n_src - 2;
                    const double x0 = source_nodes[i0], x1 = source_nodes[i0 + 1];
                    const double w1 = (t - x0) / (x1 - x0);
                    builder.add(i0, 1.0 - w1);
                    builder.add(i0 + 1, w1);
                    break;
                }
                case BoundaryPolicy::clamp:
                    builder.add(t < lo ? 0 : n_src - 1, 1.0);
                    break;
            }
            continue;
        }
        // Bracketing interval [x_k, x_{k+1}], stencil window centered on it.
        const auto it = std::upper_bound(source_nodes.begin(), source_nodes.end(), t);
        int k = static_cast<int>(it - source_nodes.begin()) - 1;
        k = std::clamp(k, 0, n_src - 2);
        int start = std::clamp(k - 1, 0, n_src - stencil);
        for (int i = 0; i < stencil; ++i) {
            double w = 1.0;
            const double xi = source_nodes[start + i];
            for (int j = 0; j < stencil; ++j) {
                if (j == i) continue;
                const double xj = source_nodes[start + j];
                w *= (t - xj) / (xi - xj);
            }
            builder.add(start + i, w);
        }
    }
    return builder.finish();
}

void TensorOperator::apply(const double* in, double* out) const {
    const int n1_in = axis1.cols, n2_in = axis2.cols;
    const int n1_out = axis1.rows, n2_out = axis2.rows;
    // intermediate: axis1 applied along m1 for every m2 column
    std::vector<double> mid(static_cast<size_t>(n1_out) * n2_in);
#pragma omp parallel for schedule(static)
    for (int j2 = 0; j2 < n2_in; ++j2) {
        const double* col = in + static_cast<size_t>(j2) * n1_in;
        double* mid_col = mid.data() + static_cast<size_t>(j2) * n1_out;
        for (int i1 = 0; i1 < n1_out; ++i1) {
            double sum = 0.0;
            for (int k = axis1.row_ptr[i1]; k < axis1.row_ptr[i1 + 1]; ++k)
                sum += axis1.values[k] * col[axis1.col_idx[k]];
            mid_col[i1] = sum;
        }
    }
#pragma omp parallel for schedule(static)
    for (int i2 = 0; i2 < n2_out; ++i2) {
        double* out_col = out + static_cast<size_t>(i2) * n1_out;
        std::fill(out_col, out_col + n1_out, 0.0);
        for (int k = axis2.row_ptr[i2]; k < axis2.row_ptr[i2 + 1]; ++k) {
            const double w = axis2.values[k];
            const double* mid_col = mid.data() + static_cast<size_t>(axis2.col_idx[k]) * n1_out;
            for (int i1 = 0; i1 < n1_out; ++i1) out_col[i1] += w * mid_col[i1];
        }
    }
}

std::vector<double> TensorOperator::apply(const std::vector<double>& v) const {
    if (static_cast<int>(v.size()) != in_size())
        throw std::invalid_argument("TensorOperator::apply: size mismatch");
    std::vector<double> out(out_size());
    apply(v.data(), out.data());
    return out;
}

std::vector<double> TensorOperator::dense() const {
    return kron(axis2, axis1).dense();
}

TensorOperator build_interpolation(const std::vector<double>& source_nodes,
                                   const std::vector<double>& targets_axis1,
                                   const std::vector<double>& targets_axis2,
                                   BoundaryPolicy policy) {
    return TensorOperator{build_interpolation_1d(source_nodes, targets_axis1, policy),
                          build_interpolation_1d(source_nodes, targets_axis2, policy)};
}

}  // namespace nts
