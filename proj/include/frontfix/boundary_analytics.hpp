#pragma once

#include <array>
#include <cstddef>
#include <span>

#include "frontfix/model.hpp"

namespace frontfix {

enum class ExpansionOrder { third, fourth };

/// Which form of the xi-linear dividend term of L'''(0) to use. `printed`
/// carries -2 D f_b / (3 sigma^2 L'); `rederived` carries -D f_b / (3 sigma^4 L'),
/// which is what differentiating the x-differentiated PDE twice at the
/// boundary produces. Both agree when D = 0.
enum class CubicSlopeForm { printed, rederived };

/// Weights of the extrapolated Taylor relation
///   sum_j alpha_j L(j x~) = gamma_0 x~ L'(0) + gamma_1 x~^2 L''(0) + gamma_2 x~^3 L'''(0) + O(.)
/// The weight on L(0, tau) is omitted because L(0, tau) = 0.
///
/// Fourth order: alpha = {256, -48, 256/27, -1}, gamma = {4980/27, 600/9, 32/3};
/// the relation is exact for x^1..x^6 (remainder O(x~^7)).
/// Third order: alpha = {81, -81/8, 1}, gamma = {255/4, 99/4, 9/2};
/// exact for x^1..x^5 (remainder O(x~^6)).
struct ExtrapolationCoeffs {
    ExpansionOrder order = ExpansionOrder::fourth;
    std::array<double, 4> alpha{};
    std::size_t sample_count = 0;
    std::array<double, 3> gamma{};
    double x_tilde = 0.0;

    static ExtrapolationCoeffs fourth_order(double x_tilde);
    static ExtrapolationCoeffs third_order(double x_tilde);

    /// Weight that makes the stencil annihilate constants, -(alpha_1 + ... + alpha_n).
    double constant_weight() const noexcept;
};

/// g2 xi^2 + g1 xi + g0 = 0.
struct QuadraticCoeffs {
    double g2 = 0.0;
    double g1 = 0.0;
    double g0 = 0.0;

    double discriminant() const noexcept { return g1 * g1 - 4.0 * g2 * g0; }
    double residual(double xi) const noexcept { return (g2 * xi + g1) * xi + g0; }
};

/// L(x) = sqrt(U - K + e^x f_b); radicands down to -1e-12 K are clamped to 0.
double intermediate_L(double u_at_x, double x, double f_b, double strike);

/// L'(0) = sqrt(r K - D f_b) / sigma.
double L_prime_0(double f_b, const MarketParams& params);

/// L''(0) as a function of the boundary slope xi = f_b' / f_b.
double L_dprime_0(double lp0, double xi, double f_b, const MarketParams& params);

/// Coefficients of L'''(0) = c2 xi^2 + c1 xi + c0.
struct CubicSlopePolynomial {
    double c2 = 0.0;
    double c1 = 0.0;
    double c0 = 0.0;
};

CubicSlopePolynomial L_tprime_0_polynomial(double lp0, double f_b, const MarketParams& params,
                                           CubicSlopeForm form = CubicSlopeForm::printed);

double L_tprime_0(double lp0, double xi, double f_b, const MarketParams& params,
                  CubicSlopeForm form = CubicSlopeForm::printed);

/// Builds the quadratic in xi from L'(0) and the weighted sample sum
/// sum_j alpha_j L(j x~).
QuadraticCoeffs assemble_quadratic(double lp0, double f_b, const MarketParams& params,
                                   const ExtrapolationCoeffs& coeffs, double sample_sum,
                                   CubicSlopeForm form = CubicSlopeForm::printed);

/// Minus-branch root (-g1 - sqrt(disc)) / (2 g2). Falls back to -g0/g1 when
/// |g2| < 1e-14 |g1|. Throws nonconvergence on a negative discriminant and
/// root_selection if the root is positive (the put boundary cannot rise).
double select_root(const QuadraticCoeffs& quadratic);

struct BoundarySlope {
    double xi = 0.0;
    double omega = 0.0;
    double lp0 = 0.0;
    QuadraticCoeffs quadratic;
};

/// Evaluates xi_tau and omega = xi_tau + kappa from the value samples near
/// x = 0. Samples land on nodes when x~ is a multiple of h; otherwise they
/// are interpolated.
BoundarySlope xi_and_omega(std::span<const double> u, double h, double f_b, const MarketParams& params,
                           const ExtrapolationCoeffs& coeffs,
                           CubicSlopeForm form = CubicSlopeForm::printed);

BoundarySlope xi_and_omega(const SolverState& state, const MarketParams& params,
                           const ExtrapolationCoeffs& coeffs,
                           CubicSlopeForm form = CubicSlopeForm::printed);

/// U_xx(0) = 2 L'(0)^2 - f_b.
double value_curvature_at_boundary(double lp0, double f_b) noexcept;

/// U_xxx(0) = 6 L'(0) L''(0) - f_b, the boundary curvature of the delta.
double delta_curvature_at_boundary(double lp0, double xi, double f_b, const MarketParams& params);

}  // namespace frontfix
