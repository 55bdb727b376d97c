#include "frontfix/rk_embedded.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "frontfix/error.hpp"
#include "frontfix/kernels.hpp"

namespace frontfix {

void StepController::validate() const {
    auto fail = [](const std::string& what) { throw SolverError(ErrorKind::invalid_config, what); };
    if (!(epsilon > 0.0)) fail("tolerance must be positive");
    if (!(eta > 0.0 && eta < 1.0)) fail("safety factor must lie in (0, 1)");
    if (!(k_min > 0.0) || !(k_min <= k_max)) fail("step bounds must satisfy 0 < k_min <= k_max");
    if (max_rejects_per_step == 0) fail("max_rejects_per_step must be positive");
}

StepDecision control_step(double k_old, double e_u, double e_v, const StepController& ctrl,
                          std::size_t rejects_so_far) {
    if (!(k_old > 0.0)) throw SolverError(ErrorKind::step_size, "step size must be positive");
    if (rejects_so_far > ctrl.max_rejects_per_step) {
        throw SolverError(ErrorKind::stalled_step, "too many rejections for one step");
    }
    const double e = std::max(e_u, e_v);
    StepDecision d;
    d.accept = e < ctrl.epsilon;
    const double exponent = d.accept ? ctrl.grow_exponent : ctrl.shrink_exponent;
    const double factor = e > 0.0 ? std::pow(ctrl.epsilon / e, exponent) : std::numeric_limits<double>::infinity();
    d.k_new = std::clamp(ctrl.eta * k_old * factor, ctrl.k_min, ctrl.k_max);
    return d;
}

void finalize_candidate(SolverState& state, double tau) {
    const double f_b = state.strike - state.u.front();
    if (!std::isfinite(f_b) || !(f_b > 0.0) || f_b > state.strike) {
        std::ostringstream msg;
        msg << "candidate boundary f_b=" << f_b << " outside (0, " << state.strike << "]";
        throw SolverError(ErrorKind::state_corruption, msg.str(), tau);
    }
    state.pin_boundaries();
    for (std::size_t i = 0; i < state.u.size(); ++i) {
        if (!std::isfinite(state.u[i]) || !std::isfinite(state.v[i])) {
            throw SolverError(ErrorKind::divergence, "non-finite sample in candidate state", tau);
        }
    }
}

EmbeddedStepper::EmbeddedStepper(const SemiDiscrete& system, const ButcherPair& pair, bool reuse_last_stage)
    : system_(system), pair_(pair), reuse_last_stage_(reuse_last_stage && pair.fsal), work_(system.make_workspace()) {
    const std::size_t n = system.grid().node_count();
    slope_u_.assign(pair.stages(), std::vector<double>(n, 0.0));
    slope_v_.assign(pair.stages(), std::vector<double>(n, 0.0));
    stage_u_.assign(n, 0.0);
    stage_v_.assign(n, 0.0);
    shadow_u_.assign(n, 0.0);
    shadow_v_.assign(n, 0.0);
}

StepAttempt EmbeddedStepper::attempt(const SolverState& state, double k) {
    const auto& kern = kernels::active();
    const std::size_t s = pair_.stages();
    const std::size_t n = state.u.size();
    last_attempt_complete_ = false;

    std::vector<const double*> pu(s), pv(s);
    for (std::size_t i = 0; i < s; ++i) {
        pu[i] = slope_u_[i].data();
        pv[i] = slope_v_[i].data();
    }

    try {
        if (!first_slope_valid_) {
            std::copy(state.u.begin(), state.u.end(), stage_u_.begin());
            std::copy(state.v.begin(), state.v.end(), stage_v_.begin());
            system_.evaluate(stage_u_, stage_v_, slope_u_[0], slope_v_[0], work_);
            ++rhs_evaluations_;
            first_slope_valid_ = true;
        }
        for (std::size_t i = 1; i < s; ++i) {
            const std::span<const double> weights = pair_.a[i];
            kern.stage_combine(stage_u_, state.u, k, weights, std::span(pu).first(i));
            kern.stage_combine(stage_v_, state.v, k, weights, std::span(pv).first(i));
            system_.evaluate(stage_u_, stage_v_, slope_u_[i], slope_v_[i], work_);
            ++rhs_evaluations_;
        }
    } catch (SolverError& e) {
        throw SolverError(e.kind(), e.what(), state.tau);
    }

    StepAttempt out;
    out.candidate.grid = state.grid;
    out.candidate.strike = state.strike;
    out.candidate.tau = state.tau + k;
    out.candidate.u.assign(n, 0.0);
    out.candidate.v.assign(n, 0.0);
    kern.stage_combine(out.candidate.u, state.u, k, pair_.b5, pu);
    kern.stage_combine(out.candidate.v, state.v, k, pair_.b5, pv);
    finalize_candidate(out.candidate, state.tau);

    kern.stage_combine(shadow_u_, state.u, k, pair_.b4, pu);
    kern.stage_combine(shadow_v_, state.v, k, pair_.b4, pv);
    shadow_v_[0] = -(state.strike - shadow_u_[0]);

    const std::size_t m = n - 1;
    out.e_u = kern.max_abs_diff(std::span<const double>(out.candidate.u).first(m), std::span<const double>(shadow_u_).first(m));
    out.e_v = kern.max_abs_diff(std::span<const double>(out.candidate.v).subspan(1, m - 1),
                                std::span<const double>(shadow_v_).subspan(1, m - 1));
    if (!std::isfinite(out.e_u) || !std::isfinite(out.e_v)) {
        throw SolverError(ErrorKind::divergence, "non-finite error estimate", state.tau);
    }
    last_attempt_complete_ = true;
    return out;
}

void EmbeddedStepper::accepted() {
    if (reuse_last_stage_ && last_attempt_complete_) {
        // The last stage was evaluated at the accepted state itself.
        std::swap(slope_u_.front(), slope_u_.back());
        std::swap(slope_v_.front(), slope_v_.back());
        first_slope_valid_ = true;
    } else {
        first_slope_valid_ = false;
    }
}

StepAttempt attempt_step(const SolverState& state, double k, const ButcherPair& pair, const SemiDiscrete& system) {
    EmbeddedStepper stepper(system, pair, false);
    return stepper.attempt(state, k);
}

namespace {

double robin_defect(const SolverState& s) {
    return std::max(std::abs(s.v.front() - s.u.front() + s.strike), std::abs(s.u.front() + s.f_b - s.strike));
}

}  // namespace

AdaptiveResult integrate_adaptive(const SemiDiscrete& system, const ButcherPair& pair, const SolverState& state0,
                                  double T, const AdaptiveOptions& options) {
    const StepController& ctrl = options.controller;
    ctrl.validate();
    const auto started = std::chrono::steady_clock::now();

    AdaptiveResult result;
    result.final_state = state0;
    RunStats& stats = result.stats;
    SolverState& state = result.final_state;

    EmbeddedStepper stepper(system, pair, options.reuse_last_stage);
    double k = options.k_initial > 0.0 ? options.k_initial : system.grid().spacing();
    k = std::clamp(k, ctrl.k_min, ctrl.k_max);
    std::size_t rejects = 0;
    double step_sum = 0.0;

    while (state.tau < T) {
        const double remaining = T - state.tau;
        const bool last = remaining <= k * (1.0 + 1e-10);
        const double k_try = last ? remaining : k;

        StepAttempt trial;
        StepDecision decision;
        bool failed = false;
        try {
            trial = stepper.attempt(state, k_try);
            decision = control_step(k_try, trial.e_u, trial.e_v, ctrl);
        } catch (const SolverError& e) {
            if (e.kind() == ErrorKind::invalid_config) throw;
            failed = true;
            decision = StepDecision{false, std::max(0.1 * k_try, ctrl.k_min)};
            result.stats.failed_attempts++;
            if (rejects + 1 > ctrl.max_rejects_per_step || k_try <= ctrl.k_min) {
                stats.diverged = true;
                stats.tau_of_failure = state.tau;
                std::ostringstream msg;
                msg << pair.name << " diverged: " << e.what();
                throw SolverError(ErrorKind::divergence, msg.str(), state.tau);
            }
        }

        if (!failed && decision.accept) {
            const double e = std::max(trial.e_u, trial.e_v);
            stats.max_accepted_error_ratio = std::max(stats.max_accepted_error_ratio, e / ctrl.epsilon);
            if (e >= ctrl.epsilon) ++stats.controller_violations;
            stats.max_boundary_rise = std::max(stats.max_boundary_rise, trial.candidate.f_b - state.f_b);
            state = std::move(trial.candidate);
            if (last) state.tau = T;
            stepper.accepted();
            stats.max_robin_defect = std::max(stats.max_robin_defect, robin_defect(state));

            ++stats.accepted_steps;
            step_sum += k_try;
            if (!(last && k_try < k)) {
                if (k_try < stats.min_step) {
                    stats.min_step = k_try;
                    stats.tau_of_min_step = state.tau - k_try;
                }
                stats.max_step = std::max(stats.max_step, k_try);
            }
            if (options.record_trace) result.trace.push_back({state.tau, k_try});
            if (options.snapshot_every > 0 && stats.accepted_steps % options.snapshot_every == 0 && !last) {
                result.snapshots.push_back(SolutionSnapshot::of(state, k_try));
            }
            rejects = 0;
            if (!last) k = decision.k_new;
        } else {
            if (!failed) {
                ++rejects;
                if (rejects > ctrl.max_rejects_per_step || k_try <= ctrl.k_min) {
                    stats.tau_of_failure = state.tau;
                    throw SolverError(ErrorKind::stalled_step, pair.name + ": step rejected repeatedly", state.tau);
                }
            } else {
                ++rejects;
            }
            ++stats.rejected_steps;
            k = decision.k_new;
        }
    }

    stats.rhs_evaluations = stepper.rhs_evaluations();
    if (stats.accepted_steps > 0) {
        stats.avg_step = step_sum / static_cast<double>(stats.accepted_steps);
        if (!std::isfinite(stats.min_step)) stats.min_step = stats.max_step = stats.avg_step;
    } else {
        stats.min_step = 0.0;
        stats.max_boundary_rise = 0.0;
    }
    result.snapshots.push_back(SolutionSnapshot::of(state, result.trace.empty() ? 0.0 : result.trace.back().k));
    stats.total_cpu_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return result;
}

SolverState integrate_fixed_rk4(const SemiDiscrete& system, const SolverState& state0, double T, double k) {
    if (!(k > 0.0)) throw SolverError(ErrorKind::step_size, "fixed step must be positive");
    const auto& kern = kernels::active();
    const std::size_t n = state0.u.size();
    auto work = system.make_workspace();
    std::vector<std::vector<double>> ru(4, std::vector<double>(n)), rv(4, std::vector<double>(n));
    std::vector<double> su(n), sv(n);
    const std::array<const double*, 4> pu{ru[0].data(), ru[1].data(), ru[2].data(), ru[3].data()};
    const std::array<const double*, 4> pv{rv[0].data(), rv[1].data(), rv[2].data(), rv[3].data()};
    static constexpr std::array<std::array<double, 3>, 4> a{{{0, 0, 0}, {0.5, 0, 0}, {0, 0.5, 0}, {0, 0, 1.0}}};
    static constexpr std::array<double, 4> b{1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0};

    SolverState state = state0;
    while (state.tau < T) {
        const double remaining = T - state.tau;
        const bool last = remaining <= k * (1.0 + 1e-10);
        const double step = last ? remaining : k;
        try {
            for (std::size_t i = 0; i < 4; ++i) {
                kern.stage_combine(su, state.u, step, std::span(a[i]).first(i), std::span(pu).first(i));
                kern.stage_combine(sv, state.v, step, std::span(a[i]).first(i), std::span(pv).first(i));
                system.evaluate(su, sv, ru[i], rv[i], work);
            }
        } catch (SolverError& e) {
            throw SolverError(e.kind(), e.what(), state.tau);
        }
        kern.stage_combine(su, state.u, step, b, pu);
        kern.stage_combine(sv, state.v, step, b, pv);
        state.u.swap(su);
        state.v.swap(sv);
        finalize_candidate(state, state.tau);
        state.tau = last ? T : state.tau + step;
    }
    return state;
}

}  // namespace frontfix
