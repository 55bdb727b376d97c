#pragma once

#include <optional>
#include <string>
#include <vector>

#include "frontfix/binomial.hpp"
#include "frontfix/harness/csv.hpp"
#include "frontfix/tableau.hpp"

namespace frontfix::harness {

struct TableOptions {
    bool full_protocol = false;
    std::optional<PairId> pair;          // overrides the gated pair
    std::optional<double> epsilon;       // overrides the gated tolerance
    std::vector<double> grids;           // overrides the grid list
    TreeConfig oracle{15001, TreeMethod::CRR};
    std::string pair_file;               // adds a file-defined pair (e.g. PP) as a display run
    bool warmup = true;
};

/// Parameter sets of the numerical examples.
MarketParams example_no_dividend(double maturity);  // K=100, r=5%, D=0, sigma=20%
MarketParams example_dividend_low_vol();            // K=100, T=0.5, r=5%, D=3%, sigma=20%
MarketParams example_dividend_high_vol();           // K=100, T=0.5, r=7%, D=3%, sigma=40%

Report table1(const TableOptions& options);
Report table2(const TableOptions& options);
Report table3(const TableOptions& options);
Report table5(const TableOptions& options);
Report table6(const TableOptions& options);

/// Dispatches on 1, 2, 3, 5 or 6; throws invalid_config otherwise.
Report run_table(int number, const TableOptions& options);

/// Result of one adaptive run inside a table; a failed run carries the
/// failure text and NaN boundary.
struct AdaptiveRun {
    RunRecord record;
    std::optional<SolverState> final_state;
    std::vector<StepTraceEntry> trace;
    std::string failure;
};

AdaptiveRun run_adaptive(const std::string& label, const MarketParams& params, double h, const ButcherPair& pair,
                         double epsilon, bool warmup, double k_max = 0.05);

/// Label fragment for file names, e.g. "DP_h0.01_eps1e-05".
std::string run_label(const std::string& pair, double h, double epsilon);

}  // namespace frontfix::harness
