#pragma once

#include <cstddef>

#include "frontfix/banded.hpp"
#include "frontfix/model.hpp"
#include "frontfix/semi_discrete.hpp"

namespace frontfix {

struct CnConfig {
    double k = 1e-5;
    double picard_tolerance = 1e-10;  // relative to the strike
    std::size_t picard_max_iterations = 100;

    void validate() const;
};

/// f_b^{n+1} = f_b^n (1 + k varpi^n / 2) / (1 - k varpi^{n+1} / 2).
/// Throws step_size when the denominator is within 1e-12 of zero.
double cn_boundary_update(double f_b_n, double varpi_n, double varpi_next, double k);

struct CnStats {
    std::size_t steps = 0;
    std::size_t picard_iterations = 0;
    std::size_t max_picard_iterations = 0;
    double max_boundary_rise = 0.0;
};

/// Trapezoidal stepping of the coupled system. The boundary samples come
/// from the boundary update (u[0] = K - f_b, v[0] = -f_b); the interior
/// unknowns are eliminated into the compact systems, which are factored once
/// for the fixed k. The implicit boundary slope and the convective coupling
/// are resolved by Picard iteration.
class CnStepper {
public:
    /// `system` should use the third-order boundary expansion.
    CnStepper(const SemiDiscrete& system, const CnConfig& config);

    /// One step of size config.k (or `k_override` > 0 for a shortened final
    /// step, which refactors). Returns the Picard iteration count.
    std::size_t step(SolverState& state, double k_override = 0.0);

private:
    void factor(double k);

    const SemiDiscrete& system_;
    CnConfig config_;
    double k_factored_ = 0.0;
    BandedLU value_lu_;
    BandedLU delta_lu_;
    SemiDiscrete::Workspace work_;
    std::vector<double> du_, dv_, rhs_u_, rhs_v_, g_, z_, w_, next_u_, next_v_;
};

/// One step from `state` with a fresh stepper.
SolverState cn_step(const SolverState& state, double k, const SemiDiscrete& system, const CnConfig& config = {});

struct CnResult {
    SolverState final_state;
    CnStats stats;
};

CnResult integrate_cn(const SemiDiscrete& system, const SolverState& state0, double T, const CnConfig& config);

}  // namespace frontfix
