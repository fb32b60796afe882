#include <initializer_list>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "nts/pipeline.hpp"

using namespace nts;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("nts_test_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("finalize fills the standard parameter couplings") {
    const struct {
        const char* name;
        double x_max;
    } rows[] = {{"VG0", 5700.0}, {"VG1", 500.0}, {"NIG0", 600.0}, {"NIG1", 700.0}};
    for (const auto& row : rows) {
        CAPTURE(row.name);
        RunConfig c = make_run_config(row.name);
        c.N_x = 50;
        finalize(c);
        CHECK(c.N_z == 100);
        CHECK(c.N_t == 25);
        CHECK(c.x_int == doctest::Approx(2.5 * c.model.K));
        CHECK(c.x_max == doctest::Approx(row.x_max));
        CHECK(c.F_target == doctest::Approx(std::max(0.65, c.x_int / c.x_max)));
    }
    // Explicit values are preserved.
    RunConfig c = make_run_config("VG1");
    c.N_x = 40;
    c.N_z = 64;
    c.N_t = 11;
    c.x_max = 800.0;
    finalize(c);
    CHECK(c.N_z == 64);
    CHECK(c.N_t == 11);
    CHECK(c.x_max == 800.0);
    CHECK_THROWS(make_run_config("GARCH"));
}

TEST_CASE("config files override preset defaults") {
    TempDir dir("config");
    const fs::path file = dir.path / "run.json";
    {
        std::ofstream out(file);
        out << R"({"preset": "NIG1", "N_x": 36, "theta": 1.0, "seed": 99})";
    }
    const RunConfig c = load_run_config(file.string());
    CHECK(c.preset_name == "NIG1");
    CHECK(c.model.alpha == doctest::Approx(0.5));
    CHECK(c.N_x == 36);
    CHECK(c.theta == 1.0);
    CHECK(c.seed == 99);
    CHECK_THROWS(load_run_config((dir.path / "missing.json").string()));
}

TEST_CASE("build_discretization produces mutually consistent structures") {
    RunConfig c = make_run_config("VG1");
    c.N_x = 16;
    finalize(c);
    const Discretization d = build_discretization(c);
    CHECK(static_cast<int>(d.grid.nodes.size()) == c.N_x + 1);
    CHECK(d.grid.x_max == doctest::Approx(c.x_max));
    CHECK(d.scheme.N_z == c.N_z);
    CHECK(static_cast<int>(d.scheme.omega.size()) == 4 * c.N_z * c.N_z);
    // y_in covers every x-node scaled by every jump factor.
    CHECK(d.ygrids.y_in.front() <= d.grid.nodes[1] * std::exp(d.zgrid.h_z * (-c.N_z + 0.5)));
    CHECK(d.ygrids.y_out.back() >= d.grid.x_max * (1.0 - 1e-12));
}

TEST_CASE("run_price writes well-formed CSV output and a manifest") {
    TempDir dir("price");
    RunConfig c = make_run_config("VG1");
    c.N_x = 10;
    c.out_dir = dir.path.string();
    finalize(c);
    const PriceReport report = run_price(c);

    REQUIRE(report.table_points.size() == 3);
    for (int i = 0; i < 3; ++i)
        CHECK(report.table_points[i] == doctest::Approx(90.0 + 10.0 * i).epsilon(1e-14));
    REQUIRE(report.table.size() == 9);
    for (const double p : report.table) CHECK(p > 0.0);
    // Table entries are interpolated from the surface.
    std::size_t k = 0;
    for (const double x1 : report.table_points)
        for (const double x2 : report.table_points)
            CHECK(report.table[k++] ==
                  doctest::Approx(price_at(report.surface, {x1, x2})).epsilon(1e-12));

    for (const char* name : {"surface.csv", "table.csv", "manifest.json"})
        CHECK(fs::exists(dir.path / name));

    const std::string table = read_file(dir.path / "table.csv");
    CHECK(table.rfind("x1,x2,price\n", 0) == 0);
    CHECK(table.find('\r') == std::string::npos);
    CHECK(table.find(';') == std::string::npos);
    CHECK(std::count(table.begin(), table.end(), '\n') == 10);  // header + 9 rows

    const std::string surface = read_file(dir.path / "surface.csv");
    CHECK(surface.rfind("x1,x2,price,delta1,delta2,gamma1,gamma2\n", 0) == 0);
    CHECK(std::count(surface.begin(), surface.end(), '\n') == 1 + 11 * 11);

    const std::string manifest = read_file(dir.path / "manifest.json");
    CHECK(manifest.find("\"N_x\": 10") != std::string::npos);
    CHECK(manifest.find("\"preset\"") != std::string::npos);

    SUBCASE("reruns are byte-identical") {
        TempDir dir2("price2");
        RunConfig c2 = c;
        c2.out_dir = dir2.path.string();
        run_price(c2);
        CHECK(read_file(dir2.path / "table.csv") == table);
        CHECK(read_file(dir2.path / "surface.csv") == surface);
    }
}

TEST_CASE("run_weights writes one row per quadrature cell") {
    TempDir dir("weights");
    RunConfig c = make_run_config("VG1");
    c.N_x = 8;
    c.out_dir = dir.path.string();
    finalize(c);
    run_weights(c);
    const std::string csv = read_file(dir.path / "weights.csv");
    CHECK(csv.rfind("l1,l2,z1,z2,weight\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 4 * c.N_z * c.N_z);
    CHECK(csv.find('\r') == std::string::npos);
}

TEST_CASE("run_converge reports decreasing errors against the reference") {
    RunConfig c = make_run_config("VG1");
    const ConvergenceReport report = run_converge(c, {6, 12}, 24);
    REQUIRE(report.N == std::vector<int>{6, 12});
    REQUIRE(report.E.size() == 2);
    CHECK(report.E[0] > 0.0);
    CHECK(report.E[1] > 0.0);
    CHECK(report.E[1] < report.E[0]);
    CHECK(std::isfinite(report.p));
    CHECK(report.p > 0.0);
}

TEST_CASE("run_mc_check compares the two pricers at requested points") {
    RunConfig c = make_run_config("VG1");
    c.N_x = 25;
    c.seed = 4;
    finalize(c);
    const std::vector<McCheckRow> rows = run_mc_check(c, {{100.0, 100.0}}, 40000);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].pide_price > 0.0);
    CHECK(rows[0].mc_price > 0.0);
    CHECK(rows[0].mc_se > 0.0);
    CHECK(rows[0].z_score ==
          doctest::Approx((rows[0].pide_price - rows[0].mc_price) / rows[0].mc_se));
    // A coarse grid still lands in the right neighborhood.
    CHECK(std::abs(rows[0].pide_price - rows[0].mc_price) < 1.0);
}
