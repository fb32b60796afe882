#ifndef NTS_MC_HPP
#define NTS_MC_HPP

#include <cstdint>
#include <random>

#include "nts/model.hpp"
#include "nts/payoff.hpp"

namespace nts {

struct McConfig {
    long long n_paths = 1000000;
    std::uint64_t seed = 0;
    bool antithetic = false;
};

struct McResult {
    double price = 0.0;
    double standard_error = 0.0;
};

// Independent generator for one path; paths form disjoint substreams.
std::mt19937_64 path_rng(std::uint64_t seed, long long path);

// One draw of the subordinator G(t): Gamma for alpha = 0, Inverse Gaussian for
// alpha = 1/2. Throws for other alpha.
double sample_subordinator(const NtsModel& model, double t, std::mt19937_64& rng);

// Precomputed terminal-state sampler: X_i(T) = x0_i exp(rT - kappa_i T + L_i(T))
// with the subordinator shared between the two components.
class TerminalSampler {
  public:
    TerminalSampler(const NtsModel& model, Vec2 x0);

    Vec2 operator()(std::mt19937_64& rng) const;
    // The pair of terminal states driven by (W, -W) over a shared subordinator.
    std::pair<Vec2, Vec2> antithetic_pair(std::mt19937_64& rng) const;
    // L(T) alone, for moment tests.
    Vec2 log_increment(std::mt19937_64& rng) const;

    Vec2 kappa() const { return kappa_; }

  private:
    Vec2 terminal(Vec2 l) const;
    Vec2 increment_from(double g, Vec2 z) const;

    NtsModel model_;
    Vec2 x0_{};
    Mat2 chol_ = Mat2::zero();  // lower Cholesky factor of rho
    Vec2 drift_{};              // compensator c = delta Gamma(1-alpha)/lambda^{1-alpha} eta
    Vec2 kappa_{};              // martingale exponents
};

Vec2 sample_terminal_assets(const NtsModel& model, Vec2 x0, std::mt19937_64& rng);

// Discounted sample mean of the payoff and its standard error; deterministic
// given (seed, n_paths, antithetic) regardless of thread count.
McResult mc_price(const NtsModel& model, const PayoffSpec& payoff, Vec2 x0,
                  const McConfig& config);

}  // namespace nts

#endif
