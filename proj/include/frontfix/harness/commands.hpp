#pragma once

#include "frontfix/harness/config.hpp"
#include "frontfix/harness/csv.hpp"

namespace frontfix::harness {

/// Prices at cfg.spots with the configured integrator, f_b(T), oracle
/// columns and any configured gates; keeps the final snapshot and, for the
/// adaptive integrator, the step trace.
Report cmd_price(const HarnessConfig& cfg);

/// Successive-grid study with fixed-step RK4 (integrator "rk4" or
/// "adaptive") or Crank-Nicolson ("cn") over cfg.grids.
Report cmd_convergence(const HarnessConfig& cfg);

/// Every (pair, h, epsilon) combination across the worker pool, with run
/// statistics and one step trace per run. Divergence is a row, not an error.
Report cmd_pairs_bench(const HarnessConfig& cfg);

/// Binomial prices and deltas (CRR and Leisen-Reimer) at cfg.spots, the
/// European reference, and optionally the boundary probe.
Report cmd_oracle(const HarnessConfig& cfg);

}  // namespace frontfix::harness
