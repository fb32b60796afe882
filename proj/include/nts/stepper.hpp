#ifndef NTS_STEPPER_HPP
#define NTS_STEPPER_HPP

#include <utility>
#include <vector>

#include "nts/fft_conv.hpp"
#include "nts/grids.hpp"
#include "nts/linsolve.hpp"
#include "nts/payoff.hpp"
#include "nts/quadrature.hpp"
#include "nts/spatial_ops.hpp"

namespace nts {

struct SolverConfig {
    double theta = 0.5;
    int N_t = 1;
    int damping_substeps = 4;  // implicit-Euler substeps of size h_t/4 replacing step 1
    double tol_fixed_point = 1e-7;
    double tol_linear = 1e-14;
    int fp_max_iter = 100;
};

struct PriceSurface {
    SpatialGrid grid;
    std::vector<double> values;  // (N_x+1)^2, first axis fast
    double time_label = 0.0;
    std::vector<double> delta1, delta2, gamma1, gamma2;  // filled by greeks()
};

struct StepStats {
    int fp_iterations = 0;
    std::vector<int> linear_iterations;  // one entry per fixed-point pass
    std::vector<double> fp_diffs;        // stopping-criterion values per pass
};

struct RunStats {
    std::vector<StepStats> steps;
    double seconds_weights = 0.0;
    double seconds_stepping = 0.0;
};

// Everything a single step needs, assembled for one (step size, theta) pair.
struct StepOperators {
    const SparseOperator* D = nullptr;
    CirculantKernel* kernel = nullptr;
    const TensorOperator* T_in = nullptr;
    const TensorOperator* T_out = nullptr;
    const TensorOperator* T_sl = nullptr;
    const SparseOperator* M = nullptr;  // I - h theta (D - r_w I)
    const IluFactors* ilu = nullptr;
    double r_w = 0.0;
};

// One theta-step of size h starting from v_prev, fixed-point iteration seeded
// with `start`. Throws on fixed-point or linear-solver failure.
std::pair<std::vector<double>, StepStats> step(const std::vector<double>& v_prev,
                                               const StepOperators& ops,
                                               const SolverConfig& config, double h, double theta,
                                               const std::vector<double>& start);

// Extrapolated fixed-point start from the last min(n,4) solutions
// (history.back() is V^{n-1}).
std::vector<double> fp_start(const std::vector<std::vector<double>>& history, int n);

// Full Algorithm: damped first step (theta = 1, substeps of h_t/4), then the
// theta = config.theta main loop.
PriceSurface solve(const NtsModel& model, const PayoffSpec& payoff, const SpatialGrid& grid,
                   const YGrids& ygrids, const QuadratureScheme& scheme,
                   const SolverConfig& config, RunStats* stats = nullptr);

// Per-axis Delta and Gamma by the nonuniform central differences.
void greeks(PriceSurface& surface);

// Cubic tensor Lagrange interpolation of the surface at x; throws if x is
// outside [0, x_max]^2.
double price_at(const PriceSurface& surface, Vec2 x);

}  // namespace nts

#endif
