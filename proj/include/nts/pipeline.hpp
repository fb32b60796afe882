#ifndef NTS_PIPELINE_HPP
#define NTS_PIPELINE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "nts/grids.hpp"
#include "nts/mc.hpp"
#include "nts/model.hpp"
#include "nts/quadrature.hpp"
#include "nts/stepper.hpp"

namespace nts {

// Effective run parameters. Zero/empty fields are filled with the standard
// couplings by finalize(): N_z = 2 N_x, N_t = round(N_x/2), x_int = 5K/2,
// x_max per preset, F_target = max(0.65, x_int/x_max).
struct RunConfig {
    std::string preset_name = "VG0";
    NtsModel model;

    int N_x = 200;
    int N_z = 0;
    int N_t = 0;
    double x_int = 0.0;
    double x_max = 0.0;
    double F_target = 0.0;

    double theta = 0.5;
    int damping_substeps = 4;
    double tol_fixed_point = 1e-7;
    double tol_linear = 1e-14;
    int fp_max_iter = 100;

    std::uint64_t seed = 0;
    int threads = 0;  // 0 = leave runtime default
    std::string out_dir;

    SolverConfig solver() const;
};

RunConfig make_run_config(const std::string& preset_name);
void finalize(RunConfig& config);

// JSON config document; recognized keys override the preset defaults.
RunConfig load_run_config(const std::string& path);

// All discrete structures of one run.
struct Discretization {
    SpatialGrid grid;
    ZGrid zgrid;
    RegionPartition partition;
    YGrids ygrids;
    QuadratureScheme scheme;
};

Discretization build_discretization(const RunConfig& config);

struct PriceReport {
    PriceSurface surface;
    std::vector<double> table_points;  // the axis values of the price table
    std::vector<double> table;         // row-major over (x1, x2) pairs
    RunStats stats;
};

// Solves the pricing problem; when out_dir is nonempty writes surface.csv,
// table.csv and manifest.json.
PriceReport run_price(const RunConfig& config);

struct ConvergenceReport {
    std::vector<int> N;
    std::vector<double> E;
    double p = 0.0;         // fitted order, least squares of log E on log N
    double residual = 0.0;  // RMS regression residual
};

ConvergenceReport run_converge(const RunConfig& config, const std::vector<int>& N_list,
                               int N_ref);

struct McCheckRow {
    Vec2 x0{};
    double pide_price = 0.0;
    double mc_price = 0.0;
    double mc_se = 0.0;
    double z_score = 0.0;
};

std::vector<McCheckRow> run_mc_check(const RunConfig& config, const std::vector<Vec2>& points,
                                     long long n_paths);

// Writes weights.csv (l1, l2, z1, z2, weight) plus manifest.json.
void run_weights(const RunConfig& config);

}  // namespace nts

#endif
