#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "frontfix/model.hpp"
#include "frontfix/semi_discrete.hpp"
#include "frontfix/tableau.hpp"

namespace frontfix {

struct StepController {
    double epsilon = 1e-5;
    double eta = 0.9;
    double shrink_exponent = 0.2;
    double grow_exponent = 0.25;
    double k_min = 1e-12;
    double k_max = 0.05;
    std::size_t max_rejects_per_step = 50;

    void validate() const;
};

struct StepDecision {
    bool accept = false;
    double k_new = 0.0;
};

/// Accept iff max(e_u, e_v) < epsilon; k_new = eta k_old (epsilon/e)^p with
/// p the grow exponent on accept and the shrink exponent on reject, clamped
/// to [k_min, k_max]. `rejects_so_far` counts consecutive rejections of the
/// current step; exceeding the limit throws stalled_step.
StepDecision control_step(double k_old, double e_u, double e_v, const StepController& ctrl,
                          std::size_t rejects_so_far = 0);

struct StepAttempt {
    SolverState candidate;
    double e_u = 0.0;
    double e_v = 0.0;
};

/// Runs the stages of one embedded step. Owns the stage buffers, so one
/// stepper serves one integration at a time.
class EmbeddedStepper {
public:
    EmbeddedStepper(const SemiDiscrete& system, const ButcherPair& pair, bool reuse_last_stage = true);

    /// Trial step of size k from `state`. Throws SolverError when a stage
    /// leaves the admissible region or produces non-finite values.
    StepAttempt attempt(const SolverState& state, double k);

    /// Tells the stepper the last attempt was accepted; with a FSAL pair the
    /// final stage slope becomes the next first-stage slope.
    void accepted();

    std::size_t rhs_evaluations() const noexcept { return rhs_evaluations_; }
    const ButcherPair& pair() const noexcept { return pair_; }

private:
    const SemiDiscrete& system_;
    const ButcherPair& pair_;
    bool reuse_last_stage_;
    bool first_slope_valid_ = false;
    bool last_attempt_complete_ = false;
    std::size_t rhs_evaluations_ = 0;
    std::vector<std::vector<double>> slope_u_, slope_v_;
    std::vector<double> stage_u_, stage_v_, shadow_u_, shadow_v_;
    SemiDiscrete::Workspace work_;
};

/// One-shot trial step (no slope reuse).
StepAttempt attempt_step(const SolverState& state, double k, const ButcherPair& pair, const SemiDiscrete& system);

struct StepTraceEntry {
    double tau = 0.0;  // time at the end of the accepted step
    double k = 0.0;
};

struct RunStats {
    double total_cpu_seconds = 0.0;
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;
    std::size_t failed_attempts = 0;  // rejections caused by a stage error
    std::size_t rhs_evaluations = 0;
    /// Step extremes over controller-chosen steps; a final step shortened to
    /// land on T is excluded from min/max but counted in the average.
    double min_step = std::numeric_limits<double>::infinity();
    double avg_step = 0.0;
    double max_step = 0.0;
    double tau_of_min_step = 0.0;
    /// Largest max(e_u, e_v)/epsilon among accepted steps (< 1 by contract).
    double max_accepted_error_ratio = 0.0;
    std::size_t controller_violations = 0;
    /// Largest f_b increase between consecutive accepted states.
    double max_boundary_rise = -std::numeric_limits<double>::infinity();
    /// Largest |v[0] - u[0] + K| and |u[0] + f_b - K| over accepted states.
    double max_robin_defect = 0.0;
    bool diverged = false;
    double tau_of_failure = 0.0;
};

struct AdaptiveOptions {
    StepController controller;
    bool reuse_last_stage = true;
    double k_initial = 0.0;  // 0 selects min(h, k_max)
    bool record_trace = true;
    std::size_t snapshot_every = 0;  // 0 keeps only the final snapshot
};

struct AdaptiveResult {
    SolverState final_state;
    std::vector<StepTraceEntry> trace;
    std::vector<SolutionSnapshot> snapshots;
    RunStats stats;
};

/// Advances from state0.tau to T under the step controller. A stage error
/// counts as a rejection with a tenfold step cut. Throws divergence (stage
/// errors) or stalled_step (error estimates) with the failure time once a
/// step has been rejected more than max_rejects_per_step times or would fall
/// below k_min.
AdaptiveResult integrate_adaptive(const SemiDiscrete& system, const ButcherPair& pair, const SolverState& state0,
                                  double T, const AdaptiveOptions& options = {});

/// Classical four-stage RK4 with the same per-stage boundary refresh; the
/// last step is shortened to land on T.
SolverState integrate_fixed_rk4(const SemiDiscrete& system, const SolverState& state0, double T, double k);

/// Applies the boundary ties f_b = K - u[0], v[0] = -f_b and checks the
/// result is finite with f_b in (0, K].
void finalize_candidate(SolverState& state, double tau);

}  // namespace frontfix
