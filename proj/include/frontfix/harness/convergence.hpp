#pragma once

#include <string>
#include <vector>

#include "frontfix/model.hpp"
#include "frontfix/semi_discrete.hpp"

namespace frontfix::harness {

/// Successive-grid (Cauchy) errors and observed orders for one quantity.
/// errors[j-1] compares grids j-1 and j on the coarser grid's nodes;
/// orders[j-2] = log2(errors[j-2] / errors[j-1]).
struct ConvergenceSeries {
    std::string quantity;
    std::vector<double> grids;
    std::vector<double> errors;
    std::vector<double> orders;
};

struct ConvergenceReport {
    ConvergenceSeries boundary;
    ConvergenceSeries value;
    ConvergenceSeries delta;
    std::vector<double> boundary_values;
    std::vector<SolverState> finals;
    double wall_seconds = 0.0;
};

enum class ConvergenceMode { rk4, cn };

/// Orders are computed from grids in the given order; each grid must halve
/// the previous one (ratio 2 to 1e-9), else invalid_config.
ConvergenceReport cauchy_report(const std::vector<SolverState>& finals);

/// Runs every grid (in parallel) and builds the report.
ConvergenceReport run_convergence(ConvergenceMode mode, const MarketParams& params, double x_max,
                                  const std::vector<double>& grids, double k, DiscretizationOptions options = {});

/// Checks that `grids` is strictly halving.
void require_nested(const std::vector<double>& grids);

}  // namespace frontfix::harness
