#pragma once

#include <span>
#include <vector>

#include "frontfix/boundary_analytics.hpp"
#include "frontfix/compact_operators.hpp"
#include "frontfix/model.hpp"

namespace frontfix {

struct DiscretizationOptions {
    ExpansionOrder expansion = ExpansionOrder::fourth;
    CubicSlopeForm cubic_form = CubicSlopeForm::printed;
    DeltaCoupling coupling = DeltaCoupling::chain_rule;
};

struct StageRefresh {
    double f_b = 0.0;
    double xi = 0.0;
    double omega = 0.0;
    double lp0 = 0.0;
};

/// f_b = K - u[0], v[0] = -f_b, then xi and omega from the boundary
/// expansion. Throws state_corruption when f_b leaves (0, K].
StageRefresh stage_refresh(std::span<const double> u, std::span<double> v, double h, const MarketParams& params,
                           const ExtrapolationCoeffs& coeffs, CubicSlopeForm form = CubicSlopeForm::printed);

/// Method-of-lines operator for the coupled (u, v) system on one grid.
/// Immutable after construction and shareable between threads; per-call
/// scratch lives in a Workspace owned by the caller.
class SemiDiscrete {
public:
    struct Workspace {
        std::vector<double> u_pp;
        std::vector<double> v_pp;
    };

    SemiDiscrete(const MarketParams& params, const GridSpec& grid, DiscretizationOptions options = {});

    const MarketParams& params() const noexcept { return params_; }
    const GridSpec& grid() const noexcept { return grid_; }
    const DiscretizationOptions& options() const noexcept { return options_; }
    const CompactSystem& compact() const noexcept { return compact_; }
    const DeltaSystem& delta() const noexcept { return delta_; }
    const ExtrapolationCoeffs& coeffs() const noexcept { return coeffs_; }

    Workspace make_workspace() const;

    /// Pins the stage boundary samples, then writes du/dt and dv/dt at all
    /// M+1 nodes (du[M] = dv[0] = dv[M] = 0). u''/v'' stay in the workspace.
    StageRefresh evaluate(std::span<double> u, std::span<double> v, std::span<double> du, std::span<double> dv,
                          Workspace& work) const;

private:
    MarketParams params_;
    GridSpec grid_;
    DiscretizationOptions options_;
    CompactSystem compact_;
    DeltaSystem delta_;
    ExtrapolationCoeffs coeffs_;
};

}  // namespace frontfix
