#include "frontfix/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "frontfix/error.hpp"

namespace frontfix {

void MarketParams::validate() const {
    auto fail = [](const std::string& what) { throw SolverError(ErrorKind::domain, what); };
    if (!(strike > 0.0)) fail("strike must be positive");
    if (!(volatility > 0.0)) fail("volatility must be positive");
    if (!(maturity > 0.0)) fail("maturity must be positive");
    if (!(dividend >= 0.0)) fail("dividend yield must be non-negative");
    if (!std::isfinite(rate)) fail("rate must be finite");
    if (dividend > 0.0 && rate < dividend) fail("dividend-paying put requires rate >= dividend");
}

GridSpec GridSpec::with_spacing(double x_max, double h) {
    if (!(x_max > 0.0) || !(h > 0.0)) {
        throw SolverError(ErrorKind::invalid_config, "grid extent and spacing must be positive");
    }
    const double ratio = x_max / h;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > 1e-9 * ratio) {
        std::ostringstream msg;
        msg << "x_max=" << x_max << " is not an integer multiple of h=" << h;
        throw SolverError(ErrorKind::invalid_config, msg.str());
    }
    GridSpec grid{x_max, static_cast<std::size_t>(rounded)};
    grid.validate();
    return grid;
}

void GridSpec::validate() const {
    if (!(x_max > 0.0)) throw SolverError(ErrorKind::invalid_config, "x_max must be positive");
    if (intervals < 8) throw SolverError(ErrorKind::invalid_config, "grid needs at least 8 intervals");
}

void SolverState::pin_boundaries() {
    f_b = strike - u.front();
    v.front() = -f_b;
    u.back() = 0.0;
    v.back() = 0.0;
}

void SolverState::check_invariants() const {
    auto fail = [this](const std::string& what) {
        throw SolverError(ErrorKind::state_corruption, what, tau);
    };
    if (u.size() != grid.node_count() || v.size() != grid.node_count()) fail("sample count does not match grid");
    if (!(f_b > 0.0) || f_b > strike) fail("free boundary outside (0, strike]");
    if (u.back() != 0.0 || v.back() != 0.0) fail("far-field samples are not zero");
    if (v.front() != -f_b) fail("delta boundary sample differs from -f_b");
    // u[0] + f_b reproduces the strike up to the rounding of one subtraction.
    if (std::abs(u.front() + f_b - strike) > 4.0 * std::numeric_limits<double>::epsilon() * strike) {
        fail("value boundary sample inconsistent with f_b");
    }
    const double floor = -negative_tolerance();
    for (double value : u) {
        if (!std::isfinite(value)) fail("non-finite value sample");
        if (value < floor) fail("negative option value");
    }
    for (double value : v) {
        if (!std::isfinite(value)) fail("non-finite delta sample");
    }
}

SolutionSnapshot SolutionSnapshot::of(const SolverState& state, double step_size_used) {
    return SolutionSnapshot{state.tau, state.f_b, state.u, state.v, step_size_used};
}

double to_log_moneyness(double spot, double boundary) {
    if (!(spot > 0.0) || !(boundary > 0.0)) {
        throw SolverError(ErrorKind::domain, "log-moneyness needs positive spot and boundary");
    }
    return std::log(spot) - std::log(boundary);
}

SolverState initial_state(const MarketParams& params, const GridSpec& grid) {
    params.validate();
    grid.validate();
    SolverState state;
    state.grid = grid;
    state.strike = params.strike;
    state.tau = 0.0;
    state.u.assign(grid.node_count(), 0.0);
    state.v.assign(grid.node_count(), 0.0);
    state.pin_boundaries();
    return state;
}

double interpolate_nodal(std::span<const double> samples, double h, double x) {
    const std::size_t last = samples.size() - 1;
    const double s = x / h;
    const auto cell = static_cast<std::ptrdiff_t>(std::floor(s));
    std::ptrdiff_t first = cell - 1;
    first = std::clamp<std::ptrdiff_t>(first, 0, static_cast<std::ptrdiff_t>(last) - 3);
    const double t = s - static_cast<double>(first);
    // Lagrange basis on the local nodes 0, 1, 2, 3.
    const double w0 = -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0;
    const double w1 = t * (t - 2.0) * (t - 3.0) / 2.0;
    const double w2 = -t * (t - 1.0) * (t - 3.0) / 2.0;
    const double w3 = t * (t - 1.0) * (t - 2.0) / 6.0;
    const auto i = static_cast<std::size_t>(first);
    return w0 * samples[i] + w1 * samples[i + 1] + w2 * samples[i + 2] + w3 * samples[i + 3];
}

double price_at(const SolverState& state, double spot) {
    if (!(spot > 0.0)) throw SolverError(ErrorKind::domain, "spot must be positive");
    if (spot <= state.f_b) return state.strike - spot;
    const double x = to_log_moneyness(spot, state.f_b);
    if (x >= state.grid.x_max) return 0.0;
    return interpolate_nodal(state.u, state.grid.spacing(), x);
}

double delta_at(const SolverState& state, double spot) {
    if (!(spot > 0.0)) throw SolverError(ErrorKind::domain, "spot must be positive");
    if (spot <= state.f_b) return -1.0;
    const double x = to_log_moneyness(spot, state.f_b);
    if (x >= state.grid.x_max) return 0.0;
    return interpolate_nodal(state.v, state.grid.spacing(), x) / spot;
}

}  // namespace frontfix
