#include "nts/quadrature.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace nts {
namespace {

// 7-point Gauss-Legendre on [-1, 1].
constexpr int kGl = 7;
constexpr double kGlNode[kGl] = {-0.9491079123427585245262, -0.7415311855993944398639,
                                 -0.4058451513773971669066, 0.0,
                                 0.4058451513773971669066,  0.7415311855993944398639,
                                 0.9491079123427585245262};
constexpr double kGlWeight[kGl] = {0.1294849661688696932706, 0.2797053914892766679015,
                                   0.3818300505051189449504, 0.4179591836734693877551,
                                   0.3818300505051189449504, 0.2797053914892766679015,
                                   0.1294849661688696932706};

using Integrand = std::function<double(Vec2)>;

double gl2d(const Integrand& f, const Rect& r) {
    const double cx = 0.5 * (r.x0 + r.x1), hx = 0.5 * (r.x1 - r.x0);
    const double cy = 0.5 * (r.y0 + r.y1), hy = 0.5 * (r.y1 - r.y0);
    double sum = 0.0;
    for (int i = 0; i < kGl; ++i)
        for (int j = 0; j < kGl; ++j)
            sum += kGlWeight[i] * kGlWeight[j] * f({cx + hx * kGlNode[i], cy + hy * kGlNode[j]});
    return sum * hx * hy;
}

double adapt2d_rec(const Integrand& f, const Rect& r, double whole, double tol, int depth,
                   bool& warn) {
    const double cx = 0.5 * (r.x0 + r.x1);
    const double cy = 0.5 * (r.y0 + r.y1);
    const Rect quads[4] = {{r.x0, cx, r.y0, cy},
                           {cx, r.x1, r.y0, cy},
                           {r.x0, cx, cy, r.y1},
                           {cx, r.x1, cy, r.y1}};
    double parts[4];
    double sum = 0.0;
    for (int q = 0; q < 4; ++q) sum += parts[q] = gl2d(f, quads[q]);
    if (std::abs(sum - whole) <= tol || depth >= 24) {
        if (depth >= 24 && std::abs(sum - whole) > tol) warn = true;
        return sum;
    }
    double refined = 0.0;
    for (int q = 0; q < 4; ++q)
        refined += adapt2d_rec(f, quads[q], parts[q], tol / 4.0, depth + 1, warn);
    return refined;
}

// Adaptive quartering; the recursion naturally grades refinement toward the
// corner nearest the singularity.
double adapt2d(const Integrand& f, const Rect& r, double rel_tol) {
    const double whole = gl2d(f, r);
    bool warn = false;
    const double tol = rel_tol * std::max(std::abs(whole), 1e-300);
    const double value = adapt2d_rec(f, r, whole, tol, 0, warn);
    return value;
}

}  // namespace

std::pair<ZGrid, RegionPartition> build_zgrid(const NtsModel& model, int N_z, double z_max,
                                              double level) {
    if (N_z < 4) throw std::invalid_argument("build_zgrid: N_z must be at least 4");
    if (z_max <= 0.0) z_max = find_truncation_radius(model, level);
    ZGrid grid;
    grid.N_z = N_z;
    grid.z_max = z_max;
    grid.h_z = z_max / N_z;
    RegionPartition part;
    part.z_max_III = z_max;
    part.z_max_II = std::sqrt(0.1) * z_max;
    part.z_max_I = 2.0 * grid.h_z;
    if (!(part.z_max_I < part.z_max_II))
        throw std::invalid_argument("build_zgrid: N_z too small, R^I would overlap R^III");
    return {grid, part};
}

double cell_moment(const NtsModel& model, const Rect& cell, double rel_tol) {
    const bool contains_origin = cell.x0 <= 0.0 && cell.x1 >= 0.0 && cell.y0 <= 0.0 && cell.y1 >= 0.0;
    if (contains_origin)
        throw std::invalid_argument("cell_moment: cell must not contain the origin");
    const LevyDensity density(model);
    return adapt2d([&](Vec2 z) { return (z[0] * z[0] + z[1] * z[1]) * density(z); }, cell, rel_tol);
}

Mat2 second_moment_RI(const NtsModel& model, const RegionPartition& partition, double rel_tol) {
    const LevyDensity density(model);
    auto ring_moment = [&](double outer_half, double inner_half) {
        // Frame between the squares ||z||_inf <= outer_half and <= inner_half,
        // split into 8 origin-free rectangles.
        const double a = outer_half, b = inner_half;
        const Rect pieces[8] = {
            {b, a, b, a},   {-a, -b, b, a},  {-a, -b, -a, -b}, {b, a, -a, -b},
            {-b, b, b, a},  {-b, b, -a, -b}, {b, a, -b, b},    {-a, -b, -b, b}};
        Mat2 m;
        for (const Rect& piece : pieces) {
            m[0][0] += adapt2d([&](Vec2 z) { return z[0] * z[0] * density(z); }, piece, rel_tol);
            m[0][1] += adapt2d([&](Vec2 z) { return z[0] * z[1] * density(z); }, piece, rel_tol);
            m[1][1] += adapt2d([&](Vec2 z) { return z[1] * z[1] * density(z); }, piece, rel_tol);
        }
        m[1][0] = m[0][1];
        return m;
    };

    Mat2 total;
    double outer = partition.z_max_I;
    double norm_total = 0.0;
    for (int ring = 0; ring < 400; ++ring) {
        const double inner = outer / 2.0;
        const Mat2 contribution = ring_moment(outer, inner);
        total = total + contribution;
        norm_total = std::abs(total[0][0]) + std::abs(total[1][1]);
        const double norm_ring = std::abs(contribution[0][0]) + std::abs(contribution[1][1]);
        if (ring > 2 && norm_ring <= rel_tol * norm_total) return total;
        outer = inner;
    }
    throw std::runtime_error("second_moment_RI: ring sum did not converge");
}

QuadratureScheme build_scheme(const NtsModel& model, const ZGrid& zgrid,
                              const RegionPartition& partition) {
    const int n = zgrid.size();
    QuadratureScheme scheme;
    scheme.N_z = zgrid.N_z;
    scheme.omega.assign(static_cast<size_t>(n) * n, 0.0);
    const LevyDensity density(model);
    const double cell_area = zgrid.h_z * zgrid.h_z;

#pragma omp parallel for collapse(2) schedule(dynamic, 16)
    for (int a2 = 0; a2 < n; ++a2) {
        for (int a1 = 0; a1 < n; ++a1) {
            const int l1 = a1 - zgrid.N_z;
            const int l2 = a2 - zgrid.N_z;
            const Vec2 c = zgrid.center(l1, l2);
            const double inf_norm = std::max(std::abs(c[0]), std::abs(c[1]));
            double w = 0.0;
            if (inf_norm <= partition.z_max_I) {
                w = 0.0;  // R^I: replaced by the artificial diffusion term
            } else if (inf_norm <= partition.z_max_II) {
                const double norm_sq = c[0] * c[0] + c[1] * c[1];
                w = cell_moment(model, zgrid.cell(l1, l2)) / norm_sq;
            } else {
                w = density(c) * cell_area;  // midpoint rule on R^III
            }
            scheme.omega[a1 + static_cast<size_t>(n) * a2] = w;
        }
    }

    double sum_w = 0.0;
    Vec2 kappa_sum{};
    for (int a2 = 0; a2 < n; ++a2) {
        for (int a1 = 0; a1 < n; ++a1) {
            const double w = scheme.omega[a1 + static_cast<size_t>(n) * a2];
            if (w == 0.0) continue;
            const Vec2 c = zgrid.center(a1 - zgrid.N_z, a2 - zgrid.N_z);
            sum_w += w;
            kappa_sum[0] += w * std::expm1(c[0]);
            kappa_sum[1] += w * std::expm1(c[1]);
        }
    }
    scheme.r_w = model.r + sum_w;
    scheme.kappa_w = {model.r - kappa_sum[0], model.r - kappa_sum[1]};
    scheme.second_moment_RI = second_moment_RI(model, partition);
    scheme.sigma_w_sq = model.sigma_sigma_t() + scheme.second_moment_RI;
    return scheme;
}

}  // namespace nts
