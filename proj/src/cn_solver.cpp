#include "frontfix/cn_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "frontfix/error.hpp"
#include "frontfix/kernels.hpp"
#include "frontfix/rk_embedded.hpp"

namespace frontfix {

void CnConfig::validate() const {
    if (!(k > 0.0)) throw SolverError(ErrorKind::invalid_config, "CN step must be positive");
    if (!(picard_tolerance > 0.0)) throw SolverError(ErrorKind::invalid_config, "Picard tolerance must be positive");
    if (picard_max_iterations == 0) throw SolverError(ErrorKind::invalid_config, "Picard iteration cap must be positive");
}

double cn_boundary_update(double f_b_n, double varpi_n, double varpi_next, double k) {
    const double denom = 1.0 - 0.5 * k * varpi_next;
    if (std::abs(denom) < 1e-12) throw SolverError(ErrorKind::step_size, "boundary update denominator vanishes");
    return f_b_n * (1.0 + 0.5 * k * varpi_n) / denom;
}

CnStepper::CnStepper(const SemiDiscrete& system, const CnConfig& config)
    : system_(system), config_(config), work_(system.make_workspace()) {
    config_.validate();
    const std::size_t n = system.grid().node_count();
    for (auto* buf : {&du_, &dv_, &rhs_u_, &rhs_v_, &g_, &z_, &w_, &next_u_, &next_v_}) buf->assign(n, 0.0);
    factor(config_.k);
}

void CnStepper::factor(double k) {
    const auto& p = system_.params();
    const double q = 1.0 + 0.5 * k * p.rate;
    const double c = 0.25 * k * p.volatility * p.volatility / q;

    // Value: (B - c A') z with A' = A minus its first column (u[0] is known).
    const CompactSystem& cs = system_.compact();
    BandedMatrix value = cs.B();
    const std::size_t m = cs.size();
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t first = i == 0 ? 1 : i - 1;
        for (std::size_t j = std::max<std::size_t>(first, 1); j <= std::min(m - 1, i + 1); ++j) {
            value.at(i, j) -= c * cs.A().at(i, j);
        }
    }
    value_lu_ = BandedLU(value);

    // Delta: (B_v - c T) on the interior with T the scaled [1, -2, 1] stencil.
    const DeltaSystem& ds = system_.delta();
    BandedMatrix delta = ds.B();
    const double s = ds.stencil_scale();
    for (std::size_t i = 0; i < ds.size(); ++i) {
        if (i > 0) delta.at(i, i - 1) -= c * s;
        delta.at(i, i) += 2.0 * c * s;
        if (i + 1 < ds.size()) delta.at(i, i + 1) -= c * s;
    }
    delta_lu_ = BandedLU(delta);
    k_factored_ = k;
}

std::size_t CnStepper::step(SolverState& state, double k_override) {
    const double k = k_override > 0.0 ? k_override : config_.k;
    if (k != k_factored_) factor(k);

    const auto& p = system_.params();
    const auto& kern = kernels::active();
    const std::size_t m = system_.grid().intervals;
    const double h = system_.grid().spacing();
    const double q = 1.0 + 0.5 * k * p.rate;
    const double c = 0.25 * k * p.volatility * p.volatility;
    const double coupling = system_.options().coupling == DeltaCoupling::printed
                                ? 0.5 * p.volatility * p.volatility
                                : 1.0;

    // Explicit half: y^n + (k/2) N(y^n).
    std::copy(state.u.begin(), state.u.end(), next_u_.begin());
    std::copy(state.v.begin(), state.v.end(), next_v_.begin());
    StageRefresh now;
    try {
        now = system_.evaluate(next_u_, next_v_, du_, dv_, work_);
    } catch (SolverError& e) {
        throw SolverError(e.kind(), e.what(), state.tau);
    }
    for (std::size_t i = 0; i <= m; ++i) {
        rhs_u_[i] = state.u[i] + 0.5 * k * du_[i];
        rhs_v_[i] = state.v[i] + 0.5 * k * dv_[i];
    }

    const double tol = config_.picard_tolerance * p.strike;
    double f_iter = state.f_b;
    std::size_t iteration = 0;
    while (true) {
        ++iteration;
        if (iteration > config_.picard_max_iterations) {
            std::ostringstream msg;
            msg << "Picard iteration did not settle within " << config_.picard_max_iterations << " sweeps";
            throw SolverError(ErrorKind::picard_nonconvergence, msg.str(), state.tau);
        }
        StageRefresh next;
        try {
            next = stage_refresh(next_u_, next_v_, h, p, system_.coeffs(), system_.options().cubic_form);
        } catch (SolverError& e) {
            throw SolverError(e.kind(), e.what(), state.tau);
        }
        const double f_new = cn_boundary_update(state.f_b, now.xi, next.xi, k);
        if (!(f_new > 0.0) || f_new > p.strike || !std::isfinite(f_new)) {
            std::ostringstream msg;
            msg << "boundary update left (0, K]: f_b=" << f_new;
            throw SolverError(ErrorKind::state_corruption, msg.str(), state.tau);
        }
        const double omega = next.xi + p.kappa();

        // Value sweep: u_i = (g_i + c z_i) / q with g the explicit part plus the lagged convection.
        for (std::size_t i = 1; i < m; ++i) g_[i] = rhs_u_[i] + 0.5 * k * omega * next_v_[i];
        w_[0] = p.strike - f_new;
        for (std::size_t i = 1; i < m; ++i) w_[i] = g_[i] / q;
        w_[m] = 0.0;
        system_.compact().right_side(w_, z_);
        value_lu_.solve(std::span(z_).first(m));
        double du_max = std::abs(w_[0] - next_u_[0]);
        next_u_[0] = w_[0];
        for (std::size_t i = 1; i < m; ++i) {
            const double u_i = (g_[i] + c * z_[i]) / q;
            du_max = std::max(du_max, std::abs(u_i - next_u_[i]));
            next_u_[i] = u_i;
        }
        next_u_[m] = 0.0;

        // Delta sweep, coupled to the fresh value curvature z.
        const double vpp0 = delta_curvature_at_boundary(L_prime_0(f_new, p), next.xi, f_new, p);
        for (std::size_t i = 1; i < m; ++i) g_[i] = rhs_v_[i] + 0.5 * k * omega * coupling * z_[i];
        w_[0] = -f_new;
        for (std::size_t i = 1; i < m; ++i) w_[i] = g_[i] / q;
        w_[m] = 0.0;
        auto interior = std::span(du_).subspan(1, m - 1);
        kern.second_difference(interior, std::span<const double>(w_).first(m + 1), system_.delta().stencil_scale());
        interior[0] -= vpp0;
        delta_lu_.solve(interior);
        next_v_[0] = w_[0];
        for (std::size_t i = 1; i < m; ++i) next_v_[i] = (g_[i] + c * interior[i - 1]) / q;
        next_v_[m] = 0.0;

        const double moved = std::abs(f_new - f_iter);
        f_iter = f_new;
        if (moved < tol && du_max < tol) break;
    }

    state.u.swap(next_u_);
    state.v.swap(next_v_);
    finalize_candidate(state, state.tau);
    state.tau += k;
    return iteration;
}

SolverState cn_step(const SolverState& state, double k, const SemiDiscrete& system, const CnConfig& config) {
    CnConfig cfg = config;
    cfg.k = k;
    CnStepper stepper(system, cfg);
    SolverState next = state;
    stepper.step(next);
    return next;
}

CnResult integrate_cn(const SemiDiscrete& system, const SolverState& state0, double T, const CnConfig& config) {
    CnStepper stepper(system, config);
    CnResult result{state0, {}};
    SolverState& state = result.final_state;
    while (state.tau < T) {
        const double remaining = T - state.tau;
        const bool last = remaining <= config.k * (1.0 + 1e-10);
        const double before = state.f_b;
        const bool shortened = remaining < config.k * (1.0 - 1e-10);
        const std::size_t its = stepper.step(state, shortened ? remaining : 0.0);
        if (last) state.tau = T;
        result.stats.steps++;
        result.stats.picard_iterations += its;
        result.stats.max_picard_iterations = std::max(result.stats.max_picard_iterations, its);
        result.stats.max_boundary_rise = std::max(result.stats.max_boundary_rise, state.f_b - before);
    }
    return result;
}

}  // namespace frontfix
