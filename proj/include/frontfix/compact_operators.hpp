#pragma once

#include <array>
#include <span>
#include <vector>

#include "frontfix/banded.hpp"
#include "frontfix/model.hpp"

namespace frontfix {

/// Row 0 of the value system after eliminating f'(0) through the Robin
/// relation f'(0) = f(0) - K:
///   7 f''_0 + 6 f''_1 - f''_2 = (12/h^2)(-2(1+h) f_0 + 2 f_1) + (24/h) K.
struct RobinRow {
    std::array<double, 2> a_row{};  // multiplies f_0, f_1
    std::array<double, 3> b_row{};  // multiplies f''_0, f''_1, f''_2
    double load_per_strike = 0.0;   // 24/h
};

RobinRow robin_row_closure(double h);

/// B u'' = A u + f_u on nodes 0..M-1 (node M is a zero Dirichlet node and is
/// eliminated). Immutable once built; B is factored here once.
class CompactSystem {
public:
    /// `strike` fixes the Robin load. For a generic f the closure is exact
    /// when strike = f(0) - f'(0).
    CompactSystem(const GridSpec& grid, double strike);

    const GridSpec& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return grid_.intervals; }
    double strike() const noexcept { return strike_; }
    double stencil_scale() const noexcept { return scale_; }

    const BandedMatrix& A() const noexcept { return a_; }
    const BandedMatrix& B() const noexcept { return b_; }
    std::span<const double> load() const noexcept { return load_; }

    /// u has M+1 samples. Writes u'' at nodes 0..M-1 into out[0..M-1] and,
    /// when out has M+1 entries, 0 at node M.
    void second_derivative(std::span<const double> u, std::span<double> out) const;

    /// A u + f_u on nodes 0..M-1.
    void right_side(std::span<const double> u, std::span<double> out) const;

private:
    GridSpec grid_;
    double strike_;
    double scale_;
    BandedMatrix a_;
    BandedMatrix b_;
    std::vector<double> load_;
    BandedLU lu_;
};

/// Compact system for the delta on the interior nodes 1..M-1 with known
/// end data v(0), v''(0) and v(M) = v''(M) = 0.
class DeltaSystem {
public:
    explicit DeltaSystem(const GridSpec& grid);

    const GridSpec& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return grid_.intervals - 1; }
    double stencil_scale() const noexcept { return scale_; }
    const BandedMatrix& B() const noexcept { return b_; }

    /// v has M+1 samples with v[0] the boundary value. Writes v'' at all
    /// M+1 nodes: out[0] = vpp0, out[M] = 0.
    void second_derivative(std::span<const double> v, double vpp0, std::span<double> out) const;

private:
    GridSpec grid_;
    double scale_;
    BandedMatrix b_;
    BandedLU lu_;
};

std::vector<double> second_derivative_u(const CompactSystem& sys, std::span<const double> u);
std::vector<double> second_derivative_v(const DeltaSystem& sys, std::span<const double> v, double v0, double vpp0);

/// How the convective coefficient couples into the delta equation.
/// `chain_rule` is omega * U_xx; `printed` is omega * (sigma^2/2) U_xx.
enum class DeltaCoupling { chain_rule, printed };

/// out[i] = (sigma^2/2) u''[i] + omega v[i] - r u[i] for i < M; out[M] = 0.
void rhs_u(std::span<const double> u, std::span<const double> v, std::span<const double> u_pp, double omega,
           const MarketParams& params, std::span<double> out);

/// out[i] = (sigma^2/2) v''[i] + omega u''[i] - r v[i] for 0 < i < M; the
/// end entries are 0 (v[0] follows the boundary, v[M] is pinned).
void rhs_v(std::span<const double> v, std::span<const double> u_pp, std::span<const double> v_pp, double omega,
           const MarketParams& params, std::span<double> out,
           DeltaCoupling coupling = DeltaCoupling::chain_rule);

}  // namespace frontfix
