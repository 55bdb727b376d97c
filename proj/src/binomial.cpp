#include "frontfix/binomial.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "frontfix/error.hpp"
#include "frontfix/kernels.hpp"

namespace frontfix {

std::size_t TreeConfig::effective_steps() const noexcept {
    if (method == TreeMethod::LeisenReimer && steps % 2 == 0) return steps + 1;
    return steps;
}

void TreeConfig::validate() const {
    if (steps < 2) throw SolverError(ErrorKind::invalid_config, "tree needs at least 2 steps");
}

namespace {

/// Peizer-Pratt inversion (method 2) of the binomial distribution.
double peizer_pratt(double z, double n) {
    const double t = z / (n + 1.0 / 3.0 + 0.1 / (n + 1.0));
    const double root = std::sqrt(0.25 - 0.25 * std::exp(-t * t * (n + 1.0 / 6.0)));
    return z >= 0.0 ? 0.5 + root : 0.5 - root;
}

}  // namespace

TreeResult binomial_put(const MarketParams& params, double spot, const TreeConfig& cfg) {
    params.validate();
    cfg.validate();
    if (!(spot > 0.0)) throw SolverError(ErrorKind::domain, "spot must be positive");

    const std::size_t n = cfg.effective_steps();
    const double T = params.maturity;
    const double dt = T / static_cast<double>(n);
    const double growth = std::exp((params.rate - params.dividend) * dt);
    const double disc = std::exp(-params.rate * dt);
    const double K = params.strike;

    double up = 0.0, down = 0.0, p = 0.0;
    if (cfg.method == TreeMethod::CRR) {
        up = std::exp(params.volatility * std::sqrt(dt));
        down = 1.0 / up;
        p = (growth - down) / (up - down);
    } else {
        const double vol_t = params.volatility * std::sqrt(T);
        const double d1 = (std::log(spot / K) + (params.rate - params.dividend + 0.5 * params.volatility * params.volatility) * T) / vol_t;
        const double d2 = d1 - vol_t;
        const double nn = static_cast<double>(n);
        p = peizer_pratt(d2, nn);
        up = growth * peizer_pratt(d1, nn) / p;
        down = (growth - p * up) / (1.0 - p);
    }
    if (!(p > 0.0 && p < 1.0)) throw SolverError(ErrorKind::invalid_config, "tree probabilities outside (0, 1)");

    // Node j of level i sits at spot * up^(i-j) * down^j.
    std::vector<double> values(n + 1), spots(n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
        spots[j] = spot * std::pow(up, static_cast<double>(n - j)) * std::pow(down, static_cast<double>(j));
        values[j] = std::max(K - spots[j], 0.0);
    }
    const auto& kern = kernels::active();
    const double inv_up = 1.0 / up;
    double level1_up = 0.0, level1_down = 0.0;
    for (std::size_t level = n; level-- > 0;) {
        kern.american_rollback(std::span(values).first(level + 2), std::span(spots).first(level + 1), disc * p,
                               disc * (1.0 - p), inv_up, K);
        if (level == 1) {
            level1_up = values[0];
            level1_down = values[1];
        }
    }
    const double delta = (level1_up - level1_down) / (spot * up - spot * down);
    return TreeResult{values[0], delta};
}

double boundary_probe(const MarketParams& params, const TreeConfig& cfg, double tau) {
    if (!(tau > 0.0)) throw SolverError(ErrorKind::domain, "probe time must be positive");
    MarketParams p = params;
    p.maturity = tau;
    const double K = p.strike;
    const double threshold = 1e-9 * K;
    auto exercised = [&](double s) { return binomial_put(p, s, cfg).price - (K - s) < threshold; };

    double lo = 1e-3 * K;
    double hi = K;
    if (!exercised(lo) || exercised(hi)) {
        throw SolverError(ErrorKind::probe_bracket, "exercise boundary not bracketed by [1e-3 K, K]", tau);
    }
    while (hi - lo > 1e-7 * K) {
        const double mid = 0.5 * (lo + hi);
        (exercised(mid) ? lo : hi) = mid;
    }
    return lo;
}

double boundary_probe_extrapolated(const MarketParams& params, const TreeConfig& cfg, double tau) {
    TreeConfig doubled = cfg;
    doubled.steps = 2 * cfg.steps;
    const double coarse = boundary_probe(params, cfg, tau);
    const double fine = boundary_probe(params, doubled, tau);
    const double r = std::sqrt(2.0);
    return (r * fine - coarse) / (r - 1.0);
}

double european_put(const MarketParams& params, double spot) {
    const double T = params.maturity;
    const double vol_t = params.volatility * std::sqrt(T);
    const double d1 = (std::log(spot / params.strike) + (params.rate - params.dividend + 0.5 * params.volatility * params.volatility) * T) / vol_t;
    const double d2 = d1 - vol_t;
    auto cdf = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
    return params.strike * std::exp(-params.rate * T) * cdf(-d2) - spot * std::exp(-params.dividend * T) * cdf(-d1);
}

}  // namespace frontfix
