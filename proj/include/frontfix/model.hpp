#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace frontfix {

/// Contract and market inputs for an American put.
struct MarketParams {
    double strike = 100.0;
    double rate = 0.05;
    double dividend = 0.0;
    double volatility = 0.2;
    double maturity = 0.5;

    /// Drift of the log-moneyness coordinate, r - D - sigma^2/2.
    double kappa() const noexcept { return rate - dividend - 0.5 * volatility * volatility; }

    /// Throws SolverError(domain) on strike/volatility/maturity <= 0, D < 0,
    /// or 0 < D with r < D (the boundary slope of L is then complex at the payoff).
    void validate() const;
};

/// Uniform grid on [0, x_max] with M intervals; nodes x_i = i*h, i = 0..M.
struct GridSpec {
    double x_max = 3.0;
    std::size_t intervals = 300;

    double spacing() const noexcept { return x_max / static_cast<double>(intervals); }
    double node(std::size_t i) const noexcept { return static_cast<double>(i) * spacing(); }
    std::size_t node_count() const noexcept { return intervals + 1; }

    /// Builds the grid whose spacing is `h`. x_max/h must be an integer
    /// (to 1e-9 relative) and the grid must have at least 8 intervals.
    static GridSpec with_spacing(double x_max, double h);

    void validate() const;
};

/// Value u = U(x_i, tau) and log-space delta v = U_x(x_i, tau) on the fixed
/// grid, together with the free boundary. Node 0 is tied to the boundary
/// (u[0] = K - f_b, v[0] = -f_b) and node M is pinned to zero.
struct SolverState {
    GridSpec grid;
    double strike = 0.0;
    double tau = 0.0;
    double f_b = 0.0;
    std::vector<double> u;
    std::vector<double> v;

    /// Re-derives f_b from u[0] and writes the boundary samples of v and the
    /// far-field zeros.
    void pin_boundaries();

    /// Throws SolverError(state_corruption) when any invariant is violated.
    void check_invariants() const;

    /// Allowed undershoot of u below zero.
    double negative_tolerance() const noexcept { return 1e-10 * strike; }
};

struct SolutionSnapshot {
    double tau = 0.0;
    double f_b = 0.0;
    std::vector<double> u;
    std::vector<double> v;
    double step_size_used = 0.0;

    static SolutionSnapshot of(const SolverState& state, double step_size_used);
};

/// x = ln S - ln f_b.
double to_log_moneyness(double spot, double boundary);

/// Payoff state at tau = 0: u = 0, f_b = K, v[0] = -K and v = 0 elsewhere.
SolverState initial_state(const MarketParams& params, const GridSpec& grid);

/// Four-point Lagrange interpolation of nodal samples at x, centred on the
/// containing interval and shifted inward at either end of the grid.
double interpolate_nodal(std::span<const double> samples, double h, double x);

/// Put price at spot S in asset coordinates.
double price_at(const SolverState& state, double spot);

/// dP/dS at spot S; the log-space delta is divided by S.
double delta_at(const SolverState& state, double spot);

}  // namespace frontfix
