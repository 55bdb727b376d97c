#include "frontfix/semi_discrete.hpp"

#include <sstream>

#include "frontfix/error.hpp"

namespace frontfix {

StageRefresh stage_refresh(std::span<const double> u, std::span<double> v, double h, const MarketParams& params,
                           const ExtrapolationCoeffs& coeffs, CubicSlopeForm form) {
    const double f_b = params.strike - u[0];
    if (!(f_b > 0.0) || f_b > params.strike) {
        std::ostringstream msg;
        msg << "stage boundary f_b=" << f_b << " outside (0, " << params.strike << "]";
        throw SolverError(ErrorKind::state_corruption, msg.str());
    }
    v[0] = -f_b;
    const BoundarySlope slope = xi_and_omega(u, h, f_b, params, coeffs, form);
    return StageRefresh{f_b, slope.xi, slope.omega, slope.lp0};
}

namespace {

ExtrapolationCoeffs coeffs_for(ExpansionOrder order, double h) {
    return order == ExpansionOrder::fourth ? ExtrapolationCoeffs::fourth_order(h)
                                           : ExtrapolationCoeffs::third_order(h);
}

}  // namespace

SemiDiscrete::SemiDiscrete(const MarketParams& params, const GridSpec& grid, DiscretizationOptions options)
    : params_(params),
      grid_(grid),
      options_(options),
      compact_(grid, params.strike),
      delta_(grid),
      coeffs_(coeffs_for(options.expansion, grid.spacing())) {
    params_.validate();
}

SemiDiscrete::Workspace SemiDiscrete::make_workspace() const {
    return Workspace{std::vector<double>(grid_.node_count(), 0.0), std::vector<double>(grid_.node_count(), 0.0)};
}

StageRefresh SemiDiscrete::evaluate(std::span<double> u, std::span<double> v, std::span<double> du,
                                    std::span<double> dv, Workspace& work) const {
    const StageRefresh stage = stage_refresh(u, v, grid_.spacing(), params_, coeffs_, options_.cubic_form);
    compact_.second_derivative(u, work.u_pp);
    const double vpp0 = delta_curvature_at_boundary(stage.lp0, stage.xi, stage.f_b, params_);
    delta_.second_derivative(v, vpp0, work.v_pp);
    rhs_u(u, v, work.u_pp, stage.omega, params_, du);
    rhs_v(v, work.u_pp, work.v_pp, stage.omega, params_, dv, options_.coupling);
    return stage;
}

}  // namespace frontfix
