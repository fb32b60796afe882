#include "nts/mc.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace nts {
namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Inverse Gaussian(mu, shape) by the transformation method with a uniform
// acceptance step (Michael, Schucany & Haas).
double sample_inverse_gaussian(double mu, double shape, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const double z = normal(rng);
    const double v = z * z;
    const double x =
        mu + mu * mu * v / (2.0 * shape) -
        mu / (2.0 * shape) * std::sqrt(4.0 * mu * shape * v + mu * mu * v * v);
    return uniform(rng) <= mu / (mu + x) ? x : mu * mu / x;
}

}  // namespace

std::mt19937_64 path_rng(std::uint64_t seed, long long path) {
    return std::mt19937_64(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(path))));
}

double sample_subordinator(const NtsModel& model, double t, std::mt19937_64& rng) {
    if (t <= 0.0) throw std::invalid_argument("sample_subordinator: t must be positive");
    if (model.alpha == 0.0) {
        std::gamma_distribution<double> gamma(model.delta * t, 1.0 / model.lambda);
        return gamma(rng);
    }
    if (model.alpha == 0.5) {
        const double dt = model.delta * t;
        const double mu = dt * std::sqrt(M_PI / model.lambda);
        const double shape = 2.0 * dt * dt * M_PI;
        return sample_inverse_gaussian(mu, shape, rng);
    }
    throw std::invalid_argument("sample_subordinator: alpha must be 0 or 1/2");
}

TerminalSampler::TerminalSampler(const NtsModel& model, Vec2 x0) : model_(model), x0_(x0) {
    validate(model);
    chol_ = cholesky(model.rho);
    const double c = model.delta * std::tgamma(1.0 - model.alpha) /
                     std::pow(model.lambda, 1.0 - model.alpha);
    drift_ = c * model.eta;
    kappa_ = {martingale_exponent(model, 0), martingale_exponent(model, 1)};
}

Vec2 TerminalSampler::increment_from(double g, Vec2 z) const {
    const double s = std::sqrt(g);
    const Vec2 w{s * z[0], s * z[1]};
    return g * model_.eta + chol_ * w - model_.T * drift_;
}

Vec2 TerminalSampler::terminal(Vec2 l) const {
    Vec2 x;
    for (int i = 0; i < 2; ++i)
        x[i] = x0_[i] * std::exp(model_.r * model_.T - kappa_[i] * model_.T + l[i]);
    return x;
}

Vec2 TerminalSampler::log_increment(std::mt19937_64& rng) const {
    const double g = sample_subordinator(model_, model_.T, rng);
    std::normal_distribution<double> normal(0.0, 1.0);
    const Vec2 z{normal(rng), normal(rng)};
    return increment_from(g, z);
}

Vec2 TerminalSampler::operator()(std::mt19937_64& rng) const {
    return terminal(log_increment(rng));
}

std::pair<Vec2, Vec2> TerminalSampler::antithetic_pair(std::mt19937_64& rng) const {
    const double g = sample_subordinator(model_, model_.T, rng);
    std::normal_distribution<double> normal(0.0, 1.0);
    const Vec2 z{normal(rng), normal(rng)};
    return {terminal(increment_from(g, z)),
            terminal(increment_from(g, {-z[0], -z[1]}))};
}

Vec2 sample_terminal_assets(const NtsModel& model, Vec2 x0, std::mt19937_64& rng) {
    return TerminalSampler(model, x0)(rng);
}

McResult mc_price(const NtsModel& model, const PayoffSpec& payoff, Vec2 x0,
                  const McConfig& config) {
    if (config.n_paths <= 1) throw std::invalid_argument("mc_price: need at least 2 paths");
    const TerminalSampler sampler(model, x0);
    const long long n = config.n_paths;
    std::vector<double> values(static_cast<std::size_t>(n));

#pragma omp parallel for schedule(static)
    for (long long p = 0; p < n; ++p) {
        std::mt19937_64 rng = path_rng(config.seed, p);
        double v;
        if (config.antithetic) {
            const auto [xa, xb] = sampler.antithetic_pair(rng);
            v = 0.5 * (payoff_eval(payoff, xa) + payoff_eval(payoff, xb));
        } else {
            v = payoff_eval(payoff, sampler(rng));
        }
        values[static_cast<std::size_t>(p)] = v;
    }

    // Deterministic serial reduction in path order.
    double mean = 0.0;
    for (long long p = 0; p < n; ++p) mean += values[static_cast<std::size_t>(p)];
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (long long p = 0; p < n; ++p) {
        const double d = values[static_cast<std::size_t>(p)] - mean;
        var += d * d;
    }
    var /= static_cast<double>(n - 1);

    const double discount = std::exp(-model.r * model.T);
    return {discount * mean, discount * std::sqrt(var / static_cast<double>(n))};
}

}  // namespace nts
