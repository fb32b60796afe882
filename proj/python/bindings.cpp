#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nts/mc.hpp"
#include "nts/model.hpp"
#include "nts/pipeline.hpp"
#include "nts/stepper.hpp"

namespace py = pybind11;
using namespace nts;

namespace {

py::array_t<double> mat2_array(const Mat2& m) {
    py::array_t<double> out({2, 2});
    auto r = out.mutable_unchecked<2>();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r(i, j) = m[i][j];
    return out;
}

RunConfig config_for(const std::string& preset_name, int n_x) {
    RunConfig config = make_run_config(preset_name);
    config.N_x = n_x;
    finalize(config);
    return config;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Two-asset option pricing under Normal Tempered Stable exponential Levy models";

    m.def("preset_names", [] {
        return std::vector<std::string>{"VG0", "VG1", "NIG0", "NIG1"};
    });

    m.def(
        "model_params",
        [](const std::string& name) {
            const NtsModel model = preset(name);
            py::dict d;
            d["alpha"] = model.alpha;
            d["delta"] = model.delta;
            d["lambda"] = model.lambda;
            d["eta"] = std::vector<double>{model.eta[0], model.eta[1]};
            d["rho"] = mat2_array(model.rho);
            d["r"] = model.r;
            d["T"] = model.T;
            d["K"] = model.K;
            return d;
        },
        py::arg("preset"));

    m.def(
        "variance_of_l",
        [](const std::string& name, double t) { return mat2_array(variance_of_L(preset(name), t)); },
        py::arg("preset"), py::arg("t") = 1.0,
        "Covariance matrix of the log-price driver L(t).");

    m.def(
        "levy_density",
        [](const std::string& name, double z1, double z2) {
            return levy_density(preset(name), {z1, z2});
        },
        py::arg("preset"), py::arg("z1"), py::arg("z2"));

    m.def(
        "martingale_exponent",
        [](const std::string& name, int component) {
            return martingale_exponent(preset(name), component);
        },
        py::arg("preset"), py::arg("component"));

    m.def(
        "quadrature_weights",
        [](const std::string& name, int n_x) {
            const RunConfig config = config_for(name, n_x);
            const Discretization d = build_discretization(config);
            const int n = 2 * config.N_z;
            py::array_t<double> out({n, n});
            auto r = out.mutable_unchecked<2>();
            for (int a2 = 0; a2 < n; ++a2)
                for (int a1 = 0; a1 < n; ++a1)
                    r(a2, a1) = d.scheme.omega[a1 + static_cast<std::size_t>(n) * a2];
            return out;
        },
        py::arg("preset"), py::arg("n_x") = 50,
        "Jump quadrature weight matrix, indexed [l2 + N_z, l1 + N_z].");

    m.def(
        "price",
        [](const std::string& name, int n_x) {
            RunConfig config = config_for(name, n_x);
            const PriceReport report = run_price(config);
            const int n = n_x + 1;
            py::dict d;
            d["nodes"] = py::array_t<double>(static_cast<py::ssize_t>(n),
                                             report.surface.grid.nodes.data());
            py::array_t<double> values({n, n});
            auto rv = values.mutable_unchecked<2>();
            for (int m2 = 0; m2 < n; ++m2)
                for (int m1 = 0; m1 < n; ++m1)
                    rv(m2, m1) = report.surface.values[m1 + static_cast<std::size_t>(n) * m2];
            d["values"] = values;
            d["table_points"] = report.table_points;
            py::array_t<double> table({3, 3});
            auto rt = table.mutable_unchecked<2>();
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) rt(i, j) = report.table[3 * i + j];
            d["table"] = table;
            return d;
        },
        py::arg("preset"), py::arg("n_x") = 50,
        "Solve the pricing equation; returns nodes, the value surface "
        "(values[m2, m1]) and the 3x3 price table at 0.9K/K/1.1K.");

    m.def(
        "price_point",
        [](const std::string& name, double x1, double x2, int n_x) {
            RunConfig config = config_for(name, n_x);
            const Discretization d = build_discretization(config);
            const PayoffSpec payoff{PayoffSpec::Kind::put_on_average, config.model.K};
            const PriceSurface surface =
                solve(config.model, payoff, d.grid, d.ygrids, d.scheme, config.solver());
            return price_at(surface, {x1, x2});
        },
        py::arg("preset"), py::arg("x1"), py::arg("x2"), py::arg("n_x") = 50);

    m.def(
        "mc_price",
        [](const std::string& name, double x1, double x2, long long n_paths, std::uint64_t seed,
           bool antithetic) {
            const NtsModel model = preset(name);
            const PayoffSpec payoff{PayoffSpec::Kind::put_on_average, model.K};
            McConfig config;
            config.n_paths = n_paths;
            config.seed = seed;
            config.antithetic = antithetic;
            const McResult result = mc_price(model, payoff, {x1, x2}, config);
            return py::make_tuple(result.price, result.standard_error);
        },
        py::arg("preset"), py::arg("x1"), py::arg("x2"), py::arg("n_paths") = 100000,
        py::arg("seed") = 0, py::arg("antithetic") = false,
        "Monte Carlo price and standard error of the put on the average.");
}
