#include "nts/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "json.hpp"

namespace nts {
namespace {

using nlohmann::json;

double preset_x_max(const std::string& name, double K) {
    if (name == "VG0") return 57.0 * K;
    if (name == "VG1") return 5.0 * K;
    if (name == "NIG0") return 6.0 * K;
    if (name == "NIG1") return 7.0 * K;
    throw std::invalid_argument("unknown preset: " + name);
}

void apply_threads(const RunConfig& config) {
#ifdef _OPENMP
    if (config.threads > 0) omp_set_num_threads(config.threads);
#else
    (void)config;
#endif
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::ofstream open_csv(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);  // binary keeps LF endings everywhere
    if (!out) throw std::runtime_error("cannot open " + path.string());
    return out;
}

json model_json(const NtsModel& m) {
    return json{{"alpha", m.alpha},
                {"delta", m.delta},
                {"lambda", m.lambda},
                {"eta", {m.eta[0], m.eta[1]}},
                {"rho", {{m.rho[0][0], m.rho[0][1]}, {m.rho[1][0], m.rho[1][1]}}},
                {"r", m.r},
                {"T", m.T},
                {"K", m.K}};
}

json manifest_base(const RunConfig& config, const Discretization& d) {
    json j;
    j["preset"] = config.preset_name;
    j["model"] = model_json(config.model);
    j["N_x"] = config.N_x;
    j["N_z"] = config.N_z;
    j["N_t"] = config.N_t;
    j["theta"] = config.theta;
    j["damping_substeps"] = config.damping_substeps;
    j["tol_fixed_point"] = config.tol_fixed_point;
    j["tol_linear"] = config.tol_linear;
    j["seed"] = config.seed;
    j["threads"] = config.threads;
    j["grid"] = {{"x_int", config.x_int},
                 {"x_max", config.x_max},
                 {"F_target", config.F_target},
                 {"F_achieved", d.grid.achieved_F},
                 {"c", d.grid.c},
                 {"x_1", d.grid.nodes[1]}};
    j["quadrature"] = {{"h_z", d.zgrid.h_z},
                       {"z_max_I", d.partition.z_max_I},
                       {"z_max_II", d.partition.z_max_II},
                       {"z_max_III", d.partition.z_max_III},
                       {"r_w", d.scheme.r_w},
                       {"kappa_w", {d.scheme.kappa_w[0], d.scheme.kappa_w[1]}}};
    j["ygrids"] = {{"Ny_minus", d.ygrids.Ny_minus},
                   {"Ny_plus", d.ygrids.Ny_plus},
                   {"Ny_star", d.ygrids.Ny_star},
                   {"sharp_in", d.ygrids.sharp_in()},
                   {"sharp_out", d.ygrids.sharp_out()}};
    return j;
}

void write_manifest(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    out << j.dump(2) << "\n";
}

}  // namespace

SolverConfig RunConfig::solver() const {
    SolverConfig s;
    s.theta = theta;
    s.N_t = N_t;
    s.damping_substeps = damping_substeps;
    s.tol_fixed_point = tol_fixed_point;
    s.tol_linear = tol_linear;
    s.fp_max_iter = fp_max_iter;
    return s;
}

RunConfig make_run_config(const std::string& preset_name) {
    RunConfig config;
    config.preset_name = preset_name;
    config.model = preset(preset_name);
    return config;
}

void finalize(RunConfig& config) {
    validate(config.model);
    if (config.N_x < 2) throw std::invalid_argument("finalize: N_x must be at least 2");
    if (config.N_z == 0) config.N_z = 2 * config.N_x;
    if (config.N_t == 0) config.N_t = std::max(1, static_cast<int>(std::lround(config.N_x / 2.0)));
    if (config.x_int == 0.0) config.x_int = 2.5 * config.model.K;
    if (config.x_max == 0.0) config.x_max = preset_x_max(config.preset_name, config.model.K);
    if (config.F_target == 0.0)
        config.F_target = std::max(0.65, config.x_int / config.x_max);
    if (config.x_int >= config.x_max)
        throw std::invalid_argument("finalize: x_int must be below x_max");
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path);
    json j;
    in >> j;

    RunConfig config = make_run_config(j.value("preset", std::string("VG0")));
    if (j.contains("model")) {
        const json& m = j["model"];
        NtsModel& model = config.model;
        model.alpha = m.value("alpha", model.alpha);
        model.delta = m.value("delta", model.delta);
        model.lambda = m.value("lambda", model.lambda);
        if (m.contains("eta")) model.eta = {m["eta"][0], m["eta"][1]};
        if (m.contains("rho"))
            model.rho = {{{m["rho"][0][0], m["rho"][0][1]}, {m["rho"][1][0], m["rho"][1][1]}}};
        model.r = m.value("r", model.r);
        model.T = m.value("T", model.T);
        model.K = m.value("K", model.K);
    }
    config.N_x = j.value("N_x", config.N_x);
    config.N_z = j.value("N_z", config.N_z);
    config.N_t = j.value("N_t", config.N_t);
    config.x_int = j.value("x_int", config.x_int);
    config.x_max = j.value("x_max", config.x_max);
    config.F_target = j.value("F_target", config.F_target);
    config.theta = j.value("theta", config.theta);
    config.damping_substeps = j.value("damping_substeps", config.damping_substeps);
    config.tol_fixed_point = j.value("tol_fixed_point", config.tol_fixed_point);
    config.tol_linear = j.value("tol_linear", config.tol_linear);
    config.fp_max_iter = j.value("fp_max_iter", config.fp_max_iter);
    config.seed = j.value("seed", config.seed);
    config.threads = j.value("threads", config.threads);
    config.out_dir = j.value("out_dir", config.out_dir);
    return config;
}

Discretization build_discretization(const RunConfig& config) {
    Discretization d;
    auto [zgrid, partition] = build_zgrid(config.model, config.N_z);
    d.zgrid = zgrid;
    d.partition = partition;
    d.grid = build_spatial_grid(config.N_x, config.x_max, config.x_int, config.F_target);
    d.ygrids = build_ygrids(config.N_z, d.zgrid.h_z, d.grid.nodes[1], config.x_max);
    d.scheme = build_scheme(config.model, d.zgrid, d.partition);
    return d;
}

PriceReport run_price(const RunConfig& config_in) {
    RunConfig config = config_in;
    finalize(config);
    apply_threads(config);

    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    const Discretization d = build_discretization(config);
    const double seconds_weights = std::chrono::duration<double>(clock::now() - t0).count();

    PriceReport report;
    report.stats.seconds_weights = seconds_weights;
    const PayoffSpec payoff{PayoffSpec::Kind::put_on_average, config.model.K};
    report.surface =
        solve(config.model, payoff, d.grid, d.ygrids, d.scheme, config.solver(), &report.stats);
    greeks(report.surface);

    report.table_points = {0.9 * config.model.K, config.model.K, 1.1 * config.model.K};
    for (const double x1 : report.table_points)
        for (const double x2 : report.table_points)
            report.table.push_back(price_at(report.surface, {x1, x2}));

    if (!config.out_dir.empty()) {
        const std::filesystem::path dir(config.out_dir);
        std::filesystem::create_directories(dir);

        auto surface_csv = open_csv(dir / "surface.csv");
        surface_csv << "x1,x2,price,delta1,delta2,gamma1,gamma2\n";
        const int n = config.N_x + 1;
        const PriceSurface& s = report.surface;
        for (int m2 = 0; m2 < n; ++m2)
            for (int m1 = 0; m1 < n; ++m1) {
                const std::size_t i = m1 + static_cast<std::size_t>(n) * m2;
                surface_csv << fmt(d.grid.nodes[m1]) << ',' << fmt(d.grid.nodes[m2]) << ','
                            << fmt(s.values[i]) << ',' << fmt(s.delta1[i]) << ','
                            << fmt(s.delta2[i]) << ',' << fmt(s.gamma1[i]) << ','
                            << fmt(s.gamma2[i]) << '\n';
            }

        auto table_csv = open_csv(dir / "table.csv");
        table_csv << "x1,x2,price\n";
        std::size_t k = 0;
        for (const double x1 : report.table_points)
            for (const double x2 : report.table_points)
                table_csv << fmt(x1) << ',' << fmt(x2) << ',' << fmt(report.table[k++]) << '\n';

        json manifest = manifest_base(config, d);
        manifest["timings"] = {{"seconds_weights", report.stats.seconds_weights},
                               {"seconds_stepping", report.stats.seconds_stepping}};
        json steps = json::array();
        long long linear_total = 0;
        for (const StepStats& st : report.stats.steps) {
            linear_total += std::accumulate(st.linear_iterations.begin(),
                                            st.linear_iterations.end(), 0LL);
            steps.push_back({{"fp_iterations", st.fp_iterations},
                             {"linear_iterations", st.linear_iterations}});
        }
        manifest["steps"] = steps;
        manifest["linear_iterations_total"] = linear_total;
        write_manifest(dir / "manifest.json", manifest);
    }
    return report;
}

ConvergenceReport run_converge(const RunConfig& config_in, const std::vector<int>& N_list,
                               int N_ref) {
    if (N_list.empty()) throw std::invalid_argument("run_converge: empty N list");
    if (N_ref <= *std::max_element(N_list.begin(), N_list.end()))
        throw std::invalid_argument("run_converge: N_ref must exceed every N");

    const auto solve_at = [&](int n) {
        RunConfig c = config_in;
        c.N_x = n;
        c.N_z = 0;  // re-derive the couplings from N_x
        c.N_t = 0;
        c.out_dir.clear();
        return run_price(c);
    };

    const PriceReport reference = solve_at(N_ref);
    const double bound = 3.0 * config_in.model.K;

    ConvergenceReport report;
    for (const int n : N_list) {
        const PriceReport run = solve_at(n);
        const SpatialGrid& grid = run.surface.grid;
        double err = 0.0;
        for (int m2 = 0; m2 <= grid.N_x; ++m2) {
            if (grid.nodes[m2] > bound) continue;
            for (int m1 = 0; m1 <= grid.N_x; ++m1) {
                if (grid.nodes[m1] > bound) continue;
                const double u = run.surface.values[m1 + static_cast<std::size_t>(grid.N_x + 1) * m2];
                const double u_ref = price_at(reference.surface, {grid.nodes[m1], grid.nodes[m2]});
                err = std::max(err, std::abs(u - u_ref));
            }
        }
        report.N.push_back(n);
        report.E.push_back(err);
    }

    // p from the least-squares slope of log E against log N.
    const std::size_t m = report.N.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double x = std::log(static_cast<double>(report.N[i]));
        const double y = std::log(report.E[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = m * sxx - sx * sx;
    const double slope = denom != 0.0 ? (m * sxy - sx * sy) / denom : 0.0;
    const double intercept = (sy - slope * sx) / m;
    report.p = -slope;
    double ss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double x = std::log(static_cast<double>(report.N[i]));
        const double resid = std::log(report.E[i]) - (intercept + slope * x);
        ss += resid * resid;
    }
    report.residual = std::sqrt(ss / m);

    if (!config_in.out_dir.empty()) {
        const std::filesystem::path dir(config_in.out_dir);
        std::filesystem::create_directories(dir);
        auto csv = open_csv(dir / "convergence.csv");
        csv << "N,E\n";
        for (std::size_t i = 0; i < m; ++i)
            csv << report.N[i] << ',' << fmt(report.E[i]) << '\n';
        json manifest;
        manifest["preset"] = config_in.preset_name;
        manifest["N_ref"] = N_ref;
        manifest["N"] = report.N;
        manifest["E"] = report.E;
        manifest["p"] = report.p;
        manifest["regression_residual"] = report.residual;
        manifest["note"] = "regression window smaller than the full-scale study (N_ref reduced)";
        write_manifest(dir / "manifest.json", manifest);
    }
    return report;
}

std::vector<McCheckRow> run_mc_check(const RunConfig& config_in, const std::vector<Vec2>& points,
                                     long long n_paths) {
    RunConfig config = config_in;
    finalize(config);
    const PriceReport pide = run_price([&] {
        RunConfig c = config;
        c.out_dir.clear();
        return c;
    }());

    const PayoffSpec payoff{PayoffSpec::Kind::put_on_average, config.model.K};
    std::vector<McCheckRow> rows;
    McConfig mc;
    mc.n_paths = n_paths;
    mc.seed = config.seed;
    for (const Vec2& x0 : points) {
        McCheckRow row;
        row.x0 = x0;
        row.pide_price = price_at(pide.surface, x0);
        const McResult r = mc_price(config.model, payoff, x0, mc);
        row.mc_price = r.price;
        row.mc_se = r.standard_error;
        row.z_score = r.standard_error > 0.0 ? (row.pide_price - r.price) / r.standard_error : 0.0;
        rows.push_back(row);
    }

    if (!config.out_dir.empty()) {
        const std::filesystem::path dir(config.out_dir);
        std::filesystem::create_directories(dir);
        auto csv = open_csv(dir / "mc_check.csv");
        csv << "x1,x2,pide_price,mc_price,mc_se,z_score\n";
        for (const McCheckRow& row : rows)
            csv << fmt(row.x0[0]) << ',' << fmt(row.x0[1]) << ',' << fmt(row.pide_price) << ','
                << fmt(row.mc_price) << ',' << fmt(row.mc_se) << ',' << fmt(row.z_score) << '\n';
    }
    return rows;
}

void run_weights(const RunConfig& config_in) {
    RunConfig config = config_in;
    finalize(config);
    apply_threads(config);
    const Discretization d = build_discretization(config);

    const std::filesystem::path dir(config.out_dir.empty() ? "." : config.out_dir);
    std::filesystem::create_directories(dir);
    auto csv = open_csv(dir / "weights.csv");
    csv << "l1,l2,z1,z2,weight\n";
    for (int l2 = -config.N_z; l2 < config.N_z; ++l2)
        for (int l1 = -config.N_z; l1 < config.N_z; ++l1) {
            const Vec2 z = d.zgrid.center(l1, l2);
            csv << l1 << ',' << l2 << ',' << fmt(z[0]) << ',' << fmt(z[1]) << ','
                << fmt(d.scheme.w(l1, l2)) << '\n';
        }
    write_manifest(dir / "manifest.json", manifest_base(config, d));
}

}  // namespace nts
