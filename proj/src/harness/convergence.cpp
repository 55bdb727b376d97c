#include "frontfix/harness/convergence.hpp"

#include <chrono>
#include <cmath>

#include "frontfix/cn_solver.hpp"
#include "frontfix/error.hpp"
#include "frontfix/harness/worker_pool.hpp"
#include "frontfix/rk_embedded.hpp"

namespace frontfix::harness {

void require_nested(const std::vector<double>& grids) {
    for (std::size_t j = 1; j < grids.size(); ++j) {
        const double ratio = grids[j - 1] / grids[j];
        if (std::abs(ratio - 2.0) > 1e-9) {
            throw SolverError(ErrorKind::invalid_config, "convergence grids must halve successively");
        }
    }
}

namespace {

double nodal_cauchy(const std::vector<double>& coarse, const std::vector<double>& fine) {
    double e = 0.0;
    for (std::size_t i = 0; i < coarse.size(); ++i) e = std::max(e, std::abs(coarse[i] - fine[2 * i]));
    return e;
}

void fill_orders(ConvergenceSeries& s) {
    for (std::size_t j = 1; j < s.errors.size(); ++j) s.orders.push_back(std::log2(s.errors[j - 1] / s.errors[j]));
}

}  // namespace

ConvergenceReport cauchy_report(const std::vector<SolverState>& finals) {
    ConvergenceReport r;
    r.boundary.quantity = "boundary";
    r.value.quantity = "value";
    r.delta.quantity = "delta";
    std::vector<double> grids;
    for (const auto& s : finals) grids.push_back(s.grid.spacing());
    require_nested(grids);
    r.boundary.grids = r.value.grids = r.delta.grids = grids;
    for (const auto& s : finals) r.boundary_values.push_back(s.f_b);
    for (std::size_t j = 1; j < finals.size(); ++j) {
        r.boundary.errors.push_back(std::abs(finals[j].f_b - finals[j - 1].f_b));
        r.value.errors.push_back(nodal_cauchy(finals[j - 1].u, finals[j].u));
        r.delta.errors.push_back(nodal_cauchy(finals[j - 1].v, finals[j].v));
    }
    fill_orders(r.boundary);
    fill_orders(r.value);
    fill_orders(r.delta);
    r.finals = finals;
    return r;
}

ConvergenceReport run_convergence(ConvergenceMode mode, const MarketParams& params, double x_max,
                                  const std::vector<double>& grids, double k, DiscretizationOptions options) {
    require_nested(grids);
    const auto started = std::chrono::steady_clock::now();
    if (mode == ConvergenceMode::cn) options.expansion = ExpansionOrder::third;
    std::vector<SolverState> finals(grids.size());
    parallel_for(grids.size(), [&](std::size_t j) {
        const GridSpec grid = GridSpec::with_spacing(x_max, grids[j]);
        const SemiDiscrete system(params, grid, options);
        const SolverState start = initial_state(params, grid);
        if (mode == ConvergenceMode::rk4) {
            finals[j] = integrate_fixed_rk4(system, start, params.maturity, k);
        } else {
            CnConfig cfg;
            cfg.k = k;
            finals[j] = integrate_cn(system, start, params.maturity, cfg).final_state;
        }
    });
    ConvergenceReport r = cauchy_report(finals);
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return r;
}

}  // namespace frontfix::harness
