#include "frontfix/boundary_analytics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "frontfix/error.hpp"

namespace frontfix {

ExtrapolationCoeffs ExtrapolationCoeffs::fourth_order(double x_tilde) {
    if (!(x_tilde > 0.0)) throw SolverError(ErrorKind::domain, "x_tilde must be positive");
    return ExtrapolationCoeffs{ExpansionOrder::fourth,
                               {256.0, -48.0, 256.0 / 27.0, -1.0},
                               4,
                               {4980.0 / 27.0, 600.0 / 9.0, 32.0 / 3.0},
                               x_tilde};
}

ExtrapolationCoeffs ExtrapolationCoeffs::third_order(double x_tilde) {
    if (!(x_tilde > 0.0)) throw SolverError(ErrorKind::domain, "x_tilde must be positive");
    return ExtrapolationCoeffs{ExpansionOrder::third,
                               {81.0, -81.0 / 8.0, 1.0, 0.0},
                               3,
                               {255.0 / 4.0, 99.0 / 4.0, 9.0 / 2.0},
                               x_tilde};
}

double ExtrapolationCoeffs::constant_weight() const noexcept {
    double sum = 0.0;
    for (std::size_t j = 0; j < sample_count; ++j) sum += alpha[j];
    return -sum;
}

double intermediate_L(double u_at_x, double x, double f_b, double strike) {
    const double radicand = u_at_x - strike + std::exp(x) * f_b;
    if (radicand < -1e-12 * strike) {
        std::ostringstream msg;
        msg << "negative radicand " << radicand << " in L at x=" << x;
        throw SolverError(ErrorKind::state_corruption, msg.str());
    }
    return std::sqrt(std::max(0.0, radicand));
}

double L_prime_0(double f_b, const MarketParams& params) {
    const double radicand = params.rate * params.strike - params.dividend * f_b;
    if (radicand < 0.0) {
        throw SolverError(ErrorKind::model_assumption, "r K - D f_b < 0: boundary slope of L is not real");
    }
    return std::sqrt(radicand) / params.volatility;
}

namespace {

void require_positive_slope(double lp0) {
    if (!(lp0 > 0.0)) {
        throw SolverError(ErrorKind::division_by_zero, "L'(0) = 0: boundary expansion is singular");
    }
}

}  // namespace

double L_dprime_0(double lp0, double xi, double f_b, const MarketParams& params) {
    require_positive_slope(lp0);
    const double s2 = params.volatility * params.volatility;
    const double scale = 2.0 * lp0 / (3.0 * s2);
    return -scale * xi - scale * params.kappa() - params.dividend * f_b / (3.0 * s2 * lp0);
}

CubicSlopePolynomial L_tprime_0_polynomial(double lp0, double f_b, const MarketParams& params,
                                           CubicSlopeForm form) {
    require_positive_slope(lp0);
    const double s2 = params.volatility * params.volatility;
    const double s4 = s2 * s2;
    const double kappa = params.kappa();
    const double dfb = params.dividend * f_b;

    CubicSlopePolynomial poly;
    poly.c2 = 2.0 * lp0 / (3.0 * s4);
    const double dividend_slope = form == CubicSlopeForm::printed ? 2.0 * dfb / (3.0 * s2 * lp0)
                                                                  : dfb / (3.0 * s4 * lp0);
    poly.c1 = 4.0 * lp0 * kappa / (3.0 * s4) - dividend_slope;
    poly.c0 = 2.0 * lp0 * kappa * kappa / (3.0 * s4) + dfb * kappa / (6.0 * s4 * lp0)
              - dfb * dfb / (12.0 * s4 * lp0 * lp0 * lp0) + params.rate * lp0 / (2.0 * s2)
              - dfb / (4.0 * s2 * lp0);
    return poly;
}

double L_tprime_0(double lp0, double xi, double f_b, const MarketParams& params, CubicSlopeForm form) {
    const auto poly = L_tprime_0_polynomial(lp0, f_b, params, form);
    return (poly.c2 * xi + poly.c1) * xi + poly.c0;
}

QuadraticCoeffs assemble_quadratic(double lp0, double f_b, const MarketParams& params,
                                   const ExtrapolationCoeffs& coeffs, double sample_sum,
                                   CubicSlopeForm form) {
    // Substitute L''(0) (linear in xi) and L'''(0) (quadratic in xi) into the
    // extrapolation relation and collect powers of xi.
    const auto cubic = L_tprime_0_polynomial(lp0, f_b, params, form);
    const double s2 = params.volatility * params.volatility;
    const double xt = coeffs.x_tilde;
    const double t1 = coeffs.gamma[0] * xt;
    const double t2 = coeffs.gamma[1] * xt * xt;
    const double t3 = coeffs.gamma[2] * xt * xt * xt;

    const double dprime_slope = -2.0 * lp0 / (3.0 * s2);
    const double dprime_const = 2.0 * lp0 * params.kappa() / (3.0 * s2) + params.dividend * f_b / (3.0 * s2 * lp0);

    QuadraticCoeffs q;
    q.g2 = cubic.c2 * t3;
    q.g1 = cubic.c1 * t3 + dprime_slope * t2;
    q.g0 = cubic.c0 * t3 - dprime_const * t2 + t1 * lp0 - sample_sum;
    return q;
}

double select_root(const QuadraticCoeffs& q) {
    double xi = 0.0;
    if (std::abs(q.g2) < 1e-14 * std::abs(q.g1)) {
        xi = -q.g0 / q.g1;
    } else {
        const double disc = q.discriminant();
        if (!(disc >= 0.0)) {
            std::ostringstream msg;
            msg << "negative discriminant " << disc << " (g2=" << q.g2 << ", g1=" << q.g1 << ", g0=" << q.g0 << ")";
            throw SolverError(ErrorKind::nonconvergence, msg.str());
        }
        xi = (-q.g1 - std::sqrt(disc)) / (2.0 * q.g2);
    }
    if (!std::isfinite(xi)) {
        throw SolverError(ErrorKind::nonconvergence, "boundary slope is not finite");
    }
    if (xi > 0.0) {
        std::ostringstream msg;
        msg << "selected root xi=" << xi << " is positive";
        throw SolverError(ErrorKind::root_selection, msg.str());
    }
    return xi;
}

BoundarySlope xi_and_omega(std::span<const double> u, double h, double f_b, const MarketParams& params,
                           const ExtrapolationCoeffs& coeffs, CubicSlopeForm form) {
    const double lp0 = L_prime_0(f_b, params);
    double sample_sum = 0.0;
    for (std::size_t j = 1; j <= coeffs.sample_count; ++j) {
        const double x = static_cast<double>(j) * coeffs.x_tilde;
        const double offset = x / h;
        const double nearest = std::round(offset);
        double u_at_x = 0.0;
        if (std::abs(offset - nearest) < 1e-9) {
            u_at_x = u[static_cast<std::size_t>(nearest)];
        } else {
            u_at_x = interpolate_nodal(u, h, x);
        }
        sample_sum += coeffs.alpha[j - 1] * intermediate_L(u_at_x, x, f_b, params.strike);
    }
    BoundarySlope slope;
    slope.lp0 = lp0;
    slope.quadratic = assemble_quadratic(lp0, f_b, params, coeffs, sample_sum, form);
    slope.xi = select_root(slope.quadratic);
    slope.omega = slope.xi + params.kappa();
    return slope;
}

BoundarySlope xi_and_omega(const SolverState& state, const MarketParams& params,
                           const ExtrapolationCoeffs& coeffs, CubicSlopeForm form) {
    return xi_and_omega(state.u, state.grid.spacing(), state.f_b, params, coeffs, form);
}

double value_curvature_at_boundary(double lp0, double f_b) noexcept { return 2.0 * lp0 * lp0 - f_b; }

double delta_curvature_at_boundary(double lp0, double xi, double f_b, const MarketParams& params) {
    return 6.0 * lp0 * L_dprime_0(lp0, xi, f_b, params) - f_b;
}

}  // namespace frontfix
