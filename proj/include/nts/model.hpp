#ifndef NTS_MODEL_HPP
#define NTS_MODEL_HPP

#include <array>
#include <complex>
#include <string>

#include "nts/linalg.hpp"

namespace nts {

// Inverse metric induced by the mixing matrix rho: <x,y>_rho = x' rho^{-1} y.
struct RhoMetric {
    Mat2 rho_inverse;
    double determinant = 0.0;

    double inner(Vec2 a, Vec2 b) const { return dot(a, rho_inverse * b); }
    double norm_sq(Vec2 a) const { return inner(a, a); }
    double norm(Vec2 a) const { return std::sqrt(norm_sq(a)); }
};

// Constants of the radial bound ell(z) <= C_ell(h) ||z||_rho^{-A_ell-2} near the
// origin and ell(z) = O(e^{-B_ell ||z||_rho}) in the tail.
struct TailConstants {
    double A_ell = 0.0;
    double B_ell = 0.0;
    double c_coeff = 0.0;     // C_ell(h) = c_coeff * e^{h * eta_norm}
    double eta_norm = 0.0;

    double C_ell(double h) const { return c_coeff * std::exp(h * eta_norm); }
};

// Market/model parameter set for the two-asset Normal Tempered Stable model.
// alpha = 0 is Variance Gamma, alpha = 1/2 is Normal Inverse Gaussian.
struct NtsModel {
    double alpha = 0.0;
    double delta = 1.0;
    double lambda = 1.0;
    Vec2 eta{};
    Mat2 rho = Mat2::identity();
    Mat2 sigma = Mat2::zero();  // diffusion matrix, zero in the pure-jump experiments
    double r = 0.0;             // risk-free rate per year
    double T = 1.0;             // maturity in years
    double K = 100.0;           // strike

    Mat2 sigma_sigma_t() const;
};

// Throws std::invalid_argument with a description on any violated invariant.
void validate(const NtsModel& model);

RhoMetric rho_metric(const NtsModel& model);

TailConstants tail_constants(const NtsModel& model);

// Cached evaluator of the Levy density; cheap to copy, safe to share.
class LevyDensity {
  public:
    explicit LevyDensity(const NtsModel& model);

    // ell(z); throws std::domain_error at z = 0 where the density is singular.
    double operator()(Vec2 z) const;

  private:
    RhoMetric metric_;
    Vec2 eta_;
    double order_;       // 1 + alpha
    double c1_;          // sqrt(||eta||_rho^2 + 2 lambda)
    double prefactor_;
};

double levy_density(const NtsModel& model, Vec2 z);

// V[L(t)] = t * delta * Gamma(2-alpha)/lambda^{2-alpha} * (rho*lambda/(1-alpha) + eta eta').
Mat2 variance_of_L(const NtsModel& model, double t);

// Characteristic exponent psi_L of the compensated NTS process, principal branch.
std::complex<double> characteristic_exponent(const NtsModel& model,
                                             const std::array<std::complex<double>, 2>& x);

// Martingale-correction exponent kappa_i = psi_L(-i e_i), so that
// e^{L_i(t) - kappa_i t} is a martingale.
double martingale_exponent(const NtsModel& model, int component);

// Smallest s such that max{ ell(z) : ||z||_inf = s } equals `level`.
double find_truncation_radius(const NtsModel& model, double level = 1e-8);

// Named parameter sets: "VG0", "VG1", "NIG0", "NIG1".
NtsModel preset(const std::string& name);

}  // namespace nts

#endif
