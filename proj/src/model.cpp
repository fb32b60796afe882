#include "nts/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nts/bessel.hpp"

namespace nts {

Mat2 NtsModel::sigma_sigma_t() const {
    Mat2 s;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            s[i][j] = sigma[i][0] * sigma[j][0] + sigma[i][1] * sigma[j][1];
    return s;
}

RhoMetric rho_metric(const NtsModel& model) {
    const double d = det(model.rho);
    if (d <= 0.0) throw std::invalid_argument("NtsModel: rho must be positive definite");
    return RhoMetric{inverse(model.rho), d};
}

void validate(const NtsModel& model) {
    if (!(model.alpha >= 0.0 && model.alpha < 1.0))
        throw std::invalid_argument("NtsModel: alpha must lie in [0,1)");
    if (!(model.delta > 0.0)) throw std::invalid_argument("NtsModel: delta must be positive");
    if (!(model.lambda > 0.0)) throw std::invalid_argument("NtsModel: lambda must be positive");
    if (!(model.T > 0.0)) throw std::invalid_argument("NtsModel: T must be positive");
    if (!(model.K > 0.0)) throw std::invalid_argument("NtsModel: K must be positive");
    cholesky(model.rho);  // throws unless rho is symmetric positive definite

    // Finite-variance moment condition: the density decays like
    // e^{-B_ell ||z||_rho}, i.e. at Euclidean rate B_ell / sqrt(lambda_max(rho)),
    // which must be at least 2.
    const TailConstants tc = tail_constants(model);
    const double lam_max = sym_eigenvalues(model.rho)[1];
    if (tc.B_ell / std::sqrt(lam_max) < 2.0)
        throw std::invalid_argument("NtsModel: moment condition B_ell >= 2 violated");
}

TailConstants tail_constants(const NtsModel& model) {
    const RhoMetric metric = rho_metric(model);
    const double eta_norm = metric.norm(model.eta);
    constexpr int d = 2;
    TailConstants tc;
    tc.A_ell = 2.0 * model.alpha;
    tc.B_ell = std::sqrt(eta_norm * eta_norm + 2.0 * model.lambda) - eta_norm;
    tc.c_coeff = std::pow(2.0, model.alpha) * model.delta * std::tgamma(model.alpha + d / 2.0) /
                 std::sqrt(std::pow(std::numbers::pi, d) * metric.determinant);
    tc.eta_norm = eta_norm;
    return tc;
}

LevyDensity::LevyDensity(const NtsModel& model)
    : metric_(rho_metric(model)), eta_(model.eta), order_(1.0 + model.alpha) {
    const double eta_sq = metric_.norm_sq(model.eta);
    c1_ = std::sqrt(eta_sq + 2.0 * model.lambda);
    prefactor_ = model.delta / std::numbers::pi *
                 std::sqrt(std::pow(eta_sq + 2.0 * model.lambda, order_) / metric_.determinant);
}

double LevyDensity::operator()(Vec2 z) const {
    const double s = metric_.norm(z);
    if (s == 0.0) throw std::domain_error("levy_density: singular at z = 0");
    // e^tau K_nu(tau) keeps the Bessel factor representable; the full
    // exponent e^{<eta,z>_rho - c1 s} is applied analytically.
    const double scaled_k = bessel_k_scaled(order_, c1_ * s);
    const double exponent = metric_.inner(eta_, z) - c1_ * s;
    return prefactor_ * scaled_k * std::pow(s, -order_) * std::exp(exponent);
}

double levy_density(const NtsModel& model, Vec2 z) { return LevyDensity(model)(z); }

Mat2 variance_of_L(const NtsModel& model, double t) {
    if (t < 0.0) throw std::domain_error("variance_of_L: t must be nonnegative");
    const double factor =
        model.delta * std::tgamma(2.0 - model.alpha) / std::pow(model.lambda, 2.0 - model.alpha);
    const Mat2 core =
        (model.lambda / (1.0 - model.alpha)) * model.rho + outer(model.eta, model.eta);
    return (t * factor) * core;
}

std::complex<double> characteristic_exponent(const NtsModel& model,
                                             const std::array<std::complex<double>, 2>& x) {
    using cd = std::complex<double>;
    const cd i(0.0, 1.0);
    const cd x_eta = x[0] * model.eta[0] + x[1] * model.eta[1];
    cd x_rho_x = 0.0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) x_rho_x += x[a] * model.rho[a][b] * x[b];
    const cd arg = model.lambda - i * x_eta + 0.5 * x_rho_x;
    if (arg.real() <= 0.0 && std::abs(arg.imag()) <= 1e-14 * std::abs(arg.real()))
        throw std::domain_error("characteristic_exponent: argument on the branch cut");

    // Centering c = delta * Gamma(1-alpha)/lambda^{1-alpha} * eta makes L compensated.
    const double cfac = model.delta * std::tgamma(1.0 - model.alpha) /
                        std::pow(model.lambda, 1.0 - model.alpha);
    const cd x_c = cfac * (x[0] * model.eta[0] + x[1] * model.eta[1]);

    cd psi;
    if (model.alpha == 0.0) {
        psi = -model.delta * std::log(arg / model.lambda);
    } else {
        const double gamma_neg = std::tgamma(1.0 - model.alpha) / (-model.alpha);
        psi = model.delta * gamma_neg *
              (std::pow(arg, model.alpha) - std::pow(model.lambda, model.alpha));
    }
    return psi - i * x_c;
}

double martingale_exponent(const NtsModel& model, int component) {
    if (component != 0 && component != 1)
        throw std::domain_error("martingale_exponent: component must be 0 or 1");
    std::array<std::complex<double>, 2> x{};
    x[component] = std::complex<double>(0.0, -1.0);
    const std::complex<double> psi = characteristic_exponent(model, x);
    return psi.real();  // imaginary part vanishes for purely imaginary argument
}

namespace {

// Maximum of ell over the boundary square ||z||_inf = s: 128 samples around
// the perimeter, then golden-section refinement near the best sample.
double boundary_max(const LevyDensity& density, double s) {
    constexpr int n_samples = 128;
    // Perimeter parameterized by p in [0, 8s): four edges of length 2s each.
    auto point_at = [&](double p) -> Vec2 {
        const double edge = 2.0 * s;
        if (p < edge) return {s, -s + p};
        p -= edge;
        if (p < edge) return {s - p, s};
        p -= edge;
        if (p < edge) return {-s, s - p};
        p -= edge;
        return {-s + p, -s};
    };
    const double perimeter = 8.0 * s;
    const double step = perimeter / n_samples;
    double best_p = 0.0;
    double best_v = -1.0;
    for (int k = 0; k < n_samples; ++k) {
        const double p = k * step;
        const double v = density(point_at(p));
        if (v > best_v) {
            best_v = v;
            best_p = p;
        }
    }
    // Golden-section on the bracketing interval (wrap-around is immaterial at
    // this sampling density; the maximizer is interior to [best-step, best+step]).
    double a = best_p - step;
    double b = best_p + step;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = density(point_at(std::fmod(c + perimeter, perimeter)));
    double fd = density(point_at(std::fmod(d + perimeter, perimeter)));
    for (int it = 0; it < 60 && (b - a) > 1e-12 * perimeter; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = density(point_at(std::fmod(c + perimeter, perimeter)));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = density(point_at(std::fmod(d + perimeter, perimeter)));
        }
    }
    return std::max({best_v, fc, fd});
}

}  // namespace

double find_truncation_radius(const NtsModel& model, double level) {
    if (!(level > 0.0)) throw std::domain_error("find_truncation_radius: level must be positive");
    const LevyDensity density(model);

    double lo = 1.0;
    while (boundary_max(density, lo) <= level) {
        lo /= 2.0;
        if (lo < 1e-12)
            throw std::runtime_error("find_truncation_radius: level above the density maximum");
    }
    double hi = std::max(2.0, 2.0 * lo);
    while (boundary_max(density, hi) > level) {
        hi *= 2.0;
        if (hi > 1e6) throw std::runtime_error("find_truncation_radius: failed to bracket");
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double g = boundary_max(density, mid);
        if (std::abs(g - level) <= 1e-9 * level) return mid;
        (g > level ? lo : hi) = mid;
        if ((hi - lo) <= 1e-12 * hi) break;
    }
    return 0.5 * (lo + hi);
}

NtsModel preset(const std::string& name) {
    NtsModel m;
    m.sigma = Mat2::zero();
    m.K = 100.0;
    if (name == "VG0") {
        m.alpha = 0.0;
        m.lambda = 1.0;
        m.delta = 1.0;
        m.eta = {-0.1, -0.2};
        m.rho = {{{0.09, 0.06}, {0.06, 0.16}}};
        m.r = 0.05;
        m.T = 1.0;
    } else if (name == "VG1") {
        m.alpha = 0.0;
        m.lambda = 6.0;
        m.delta = 6.0;
        m.eta = {-0.1, -0.2};
        m.rho = {{{0.01, 0.0}, {0.0, 0.0225}}};
        m.r = 0.0;
        m.T = 0.5;
    } else if (name == "NIG0") {
        m.alpha = 0.5;
        m.lambda = 20766.4;
        m.delta = 0.77576;
        m.eta = {-37.688, -2.224};
        m.rho = {{{3.984, 3.160}, {3.160, 3.512}}};
        m.r = 0.0;
        m.T = 0.5;
    } else if (name == "NIG1") {
        m.alpha = 0.5;
        m.lambda = 57.1108;
        m.delta = 4.26367;
        m.eta = {-0.295846, -0.292984};
        m.rho = {{{0.037021, 0.026574}, {0.026574, 0.054613}}};
        m.r = 0.0;
        m.T = 0.5;
    } else {
        throw std::invalid_argument("unknown preset: " + name);
    }
    return m;
}

}  // namespace nts
