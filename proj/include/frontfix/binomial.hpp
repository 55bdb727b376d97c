#pragma once

#include <cstddef>

#include "frontfix/model.hpp"

namespace frontfix {

enum class TreeMethod { CRR, LeisenReimer };

struct TreeConfig {
    std::size_t steps = 15001;
    TreeMethod method = TreeMethod::CRR;

    /// Leisen-Reimer needs an odd step count; even counts are bumped by one.
    std::size_t effective_steps() const noexcept;
    void validate() const;
};

struct TreeResult {
    double price = 0.0;
    double delta = 0.0;
};

/// American put by backward induction with early exercise at every node;
/// the lattice drifts at r - D. Delta is the depth-1 difference quotient.
/// The option expires at params.maturity.
TreeResult binomial_put(const MarketParams& params, double spot, const TreeConfig& cfg = {});

/// Largest spot at which the tree price equals intrinsic value (to 1e-9 K),
/// located by bisection on [1e-3 K, K] for an option with `tau` to expiry.
/// Throws probe_bracket when the bracket does not straddle the boundary.
double boundary_probe(const MarketParams& params, const TreeConfig& cfg, double tau);

/// Probes at n and 2n steps and removes the leading 1/sqrt(n) bias.
double boundary_probe_extrapolated(const MarketParams& params, const TreeConfig& cfg, double tau);

/// Black-Scholes European put with continuous dividend yield.
double european_put(const MarketParams& params, double spot);

}  // namespace frontfix
