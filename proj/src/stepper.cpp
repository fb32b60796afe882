#include "nts/stepper.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

namespace nts {
namespace {

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (const double x : v) m = std::max(m, std::abs(x));
    return m;
}

SparseOperator implicit_matrix(const SparseOperator& d, double h, double theta, double r_w) {
    // I - h theta (D - r_w I) = (1 + h theta r_w) I - h theta D
    return add(SparseOperator::identity(d.rows), d, 1.0 + h * theta * r_w, -h * theta);
}

TensorOperator build_t_sl(const SpatialGrid& grid, Vec2 kappa_w, double h) {
    const auto departures = sl_departure_grid(grid, kappa_w, h);
    return TensorOperator{
        build_interpolation_1d(grid.nodes, departures[0], BoundaryPolicy::linear_extrapolation),
        build_interpolation_1d(grid.nodes, departures[1], BoundaryPolicy::linear_extrapolation)};
}

}  // namespace

std::pair<std::vector<double>, StepStats> step(const std::vector<double>& v_prev,
                                               const StepOperators& ops,
                                               const SolverConfig& config, double h, double theta,
                                               const std::vector<double>& start) {
    const std::size_t n = v_prev.size();
    StepStats stats;

    // Right-hand side W = T^SL (I + h(1-theta)(D + B_w - r_w I)) V^{n-1}, once.
    std::vector<double> expl = v_prev;
    if (theta < 1.0) {
        const std::vector<double> dv = ops.D->apply(v_prev);
        const std::vector<double> bv = apply_B(*ops.kernel, *ops.T_in, *ops.T_out, v_prev);
        const double c = h * (1.0 - theta);
        for (std::size_t i = 0; i < n; ++i)
            expl[i] += c * (dv[i] + bv[i] - ops.r_w * v_prev[i]);
    }
    const std::vector<double> w = ops.T_sl->apply(expl);

    // Fixed point: M Y^k = W + h theta B_w Y^{k-1}.
    std::vector<double> y = start;
    for (int k = 1; k <= config.fp_max_iter; ++k) {
        std::vector<double> rhs = apply_B(*ops.kernel, *ops.T_in, *ops.T_out, y);
        const double c = h * theta;
        for (std::size_t i = 0; i < n; ++i) rhs[i] = w[i] + c * rhs[i];

        SolveResult solved = bicgstab(*ops.M, ops.ilu, rhs, y, config.tol_linear, 1000);
        if (solved.status != SolveStatus::converged)
            throw std::runtime_error("step: linear solver " + to_string(solved.status) +
                                     " (residual " + std::to_string(solved.residual) + ")");
        stats.linear_iterations.push_back(solved.iterations);

        double diff = 0.0;
        for (std::size_t i = 0; i < n; ++i) diff = std::max(diff, std::abs(solved.x[i] - y[i]));
        const double crit = diff / std::max(1.0, max_abs(solved.x));
        stats.fp_diffs.push_back(crit);
        y = std::move(solved.x);
        stats.fp_iterations = k;
        if (crit < config.tol_fixed_point) return {std::move(y), std::move(stats)};
    }
    throw std::runtime_error("step: fixed-point iteration did not converge in " +
                             std::to_string(config.fp_max_iter) + " passes");
}

std::vector<double> fp_start(const std::vector<std::vector<double>>& history, int n) {
    if (history.empty()) throw std::invalid_argument("fp_start: empty history");
    const auto back = [&](int j) -> const std::vector<double>& {  // V^{n-j}
        return history[history.size() - j];
    };
    const std::size_t depth = std::min<std::size_t>(history.size(), std::min(n, 4));
    std::vector<double> start(back(1).size(), 0.0);
    static const std::array<std::array<double, 4>, 4> weights{{
        {1.0, 0.0, 0.0, 0.0},
        {2.0, -1.0, 0.0, 0.0},
        {3.0, -3.0, 1.0, 0.0},
        {4.0, -6.0, 4.0, -1.0},
    }};
    const auto& w = weights[depth - 1];
    for (std::size_t j = 0; j < depth; ++j) {
        const std::vector<double>& v = back(static_cast<int>(j) + 1);
        for (std::size_t i = 0; i < start.size(); ++i) start[i] += w[j] * v[i];
    }
    return start;
}

PriceSurface solve(const NtsModel& model, const PayoffSpec& payoff, const SpatialGrid& grid,
                   const YGrids& ygrids, const QuadratureScheme& scheme,
                   const SolverConfig& config, RunStats* stats) {
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();

    const double h_t = model.T / config.N_t;
    const SparseOperator d = build_diffusion(grid, scheme.sigma_w_sq);
    CirculantKernel kernel = build_kernel(scheme, ygrids);
    const TensorOperator t_in =
        build_interpolation(grid.nodes, ygrids.y_in, ygrids.y_in, BoundaryPolicy::zero);
    TensorOperator t_out{
        build_interpolation_1d(ygrids.y_out, grid.nodes, BoundaryPolicy::linear_extrapolation),
        build_interpolation_1d(ygrids.y_out, grid.nodes, BoundaryPolicy::linear_extrapolation)};

    std::vector<std::vector<double>> history;
    history.push_back(initial_vector(payoff, grid));

    StepOperators ops;
    ops.D = &d;
    ops.kernel = &kernel;
    ops.T_in = &t_in;
    ops.T_out = &t_out;
    ops.r_w = scheme.r_w;

    const auto record = [&](StepStats&& s) {
        if (stats != nullptr) stats->steps.push_back(std::move(s));
    };

    // Damped first step: `damping_substeps` implicit-Euler steps of size
    // h_t/damping_substeps, together constituting physical step n = 1.
    {
        const double h_sub = h_t / config.damping_substeps;
        const TensorOperator t_sl = build_t_sl(grid, scheme.kappa_w, h_sub);
        const SparseOperator m = implicit_matrix(d, h_sub, 1.0, scheme.r_w);
        const IluFactors factors = ilu0(m);
        ops.T_sl = &t_sl;
        ops.M = &m;
        ops.ilu = &factors;

        std::vector<double> v = history.back();
        for (int s = 0; s < config.damping_substeps; ++s) {
            auto [next, step_stats] = step(v, ops, config, h_sub, 1.0, v);
            v = std::move(next);
            record(std::move(step_stats));
        }
        history.push_back(std::move(v));
    }

    // Main theta loop, steps n = 2 .. N_t; matrix and factors rebuilt once for
    // the full step size.
    {
        const TensorOperator t_sl = build_t_sl(grid, scheme.kappa_w, h_t);
        const SparseOperator m = implicit_matrix(d, h_t, config.theta, scheme.r_w);
        const IluFactors factors = ilu0(m);
        ops.T_sl = &t_sl;
        ops.M = &m;
        ops.ilu = &factors;

        for (int n = 2; n <= config.N_t; ++n) {
            const std::vector<double> start = fp_start(history, n);
            auto [next, step_stats] = step(history.back(), ops, config, h_t, config.theta, start);
            history.push_back(std::move(next));
            record(std::move(step_stats));
            if (history.size() > 4) history.erase(history.begin());
        }
    }

    PriceSurface surface;
    surface.grid = grid;
    surface.values = history.back();
    surface.time_label = model.T;
    if (stats != nullptr)
        stats->seconds_stepping = std::chrono::duration<double>(clock::now() - t0).count();
    return surface;
}

void greeks(PriceSurface& surface) {
    const SparseOperator d1 = fd_matrix_first(surface.grid);
    const SparseOperator d2 = fd_matrix_second(surface.grid);
    const SparseOperator eye = SparseOperator::identity(surface.grid.N_x + 1);
    surface.delta1 = TensorOperator{d1, eye}.apply(surface.values);
    surface.delta2 = TensorOperator{eye, d1}.apply(surface.values);
    surface.gamma1 = TensorOperator{d2, eye}.apply(surface.values);
    surface.gamma2 = TensorOperator{eye, d2}.apply(surface.values);
}

double price_at(const PriceSurface& surface, Vec2 x) {
    const SpatialGrid& grid = surface.grid;
    for (int i = 0; i < 2; ++i)
        if (x[i] < 0.0 || x[i] > grid.x_max) throw std::domain_error("price_at: out of domain");
    const SparseOperator row1 =
        build_interpolation_1d(grid.nodes, {x[0]}, BoundaryPolicy::zero);
    const SparseOperator row2 =
        build_interpolation_1d(grid.nodes, {x[1]}, BoundaryPolicy::zero);
    const int n = grid.N_x + 1;
    double value = 0.0;
    for (int k2 = row2.row_ptr[0]; k2 < row2.row_ptr[1]; ++k2)
        for (int k1 = row1.row_ptr[0]; k1 < row1.row_ptr[1]; ++k1)
            value += row2.values[k2] * row1.values[k1] *
                     surface.values[row1.col_idx[k1] + static_cast<std::size_t>(n) * row2.col_idx[k2]];
    return value;
}

}  // namespace nts
