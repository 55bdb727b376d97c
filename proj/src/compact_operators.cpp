#include "frontfix/compact_operators.hpp"

#include "frontfix/error.hpp"
#include "frontfix/kernels.hpp"

namespace frontfix {

RobinRow robin_row_closure(double h) {
    if (!(h > 0.0)) throw SolverError(ErrorKind::domain, "grid spacing must be positive");
    const double scale = 12.0 / (h * h);
    const double a = 1.0 + h;
    return RobinRow{{-2.0 * a * scale, 2.0 * scale}, {7.0, 6.0, -1.0}, 24.0 / h};
}

CompactSystem::CompactSystem(const GridSpec& grid, double strike)
    : grid_(grid), strike_(strike), scale_(0.0), a_(grid.intervals), b_(grid.intervals), load_(grid.intervals, 0.0) {
    grid_.validate();
    const double h = grid_.spacing();
    const std::size_t m = size();
    scale_ = 12.0 / (h * h);

    const RobinRow row = robin_row_closure(h);
    a_.at(0, 0) = row.a_row[0];
    a_.at(0, 1) = row.a_row[1];
    b_.at(0, 0) = row.b_row[0];
    b_.at(0, 1) = row.b_row[1];
    b_.at(0, 2) = row.b_row[2];
    load_[0] = row.load_per_strike * strike;

    for (std::size_t i = 1; i < m; ++i) {
        a_.at(i, i - 1) = scale_;
        a_.at(i, i) = -2.0 * scale_;
        b_.at(i, i - 1) = 1.0;
        b_.at(i, i) = 10.0;
        if (i + 1 < m) {
            a_.at(i, i + 1) = scale_;
            b_.at(i, i + 1) = 1.0;
        }
    }
    lu_ = BandedLU(b_);
}

void CompactSystem::right_side(std::span<const double> u, std::span<double> out) const {
    const std::size_t m = size();
    out[0] = (a_.at(0, 0) * u[0] + a_.at(0, 1) * u[1]) + load_[0];
    // Rows 1..M-1 see u[M] = 0 through the last stencil.
    kernels::active().second_difference(out.subspan(1, m - 1), u.first(m + 1), scale_);
}

void CompactSystem::second_derivative(std::span<const double> u, std::span<double> out) const {
    const std::size_t m = size();
    right_side(u, out);
    lu_.solve(out.first(m));
    if (out.size() > m) out[m] = 0.0;
}

DeltaSystem::DeltaSystem(const GridSpec& grid) : grid_(grid), scale_(0.0) {
    grid_.validate();
    const double h = grid_.spacing();
    scale_ = 12.0 / (h * h);
    const std::size_t n = size();
    b_ = BandedMatrix(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) b_.at(i, i - 1) = 1.0;
        b_.at(i, i) = 10.0;
        if (i + 1 < n) b_.at(i, i + 1) = 1.0;
    }
    lu_ = BandedLU(b_);
}

void DeltaSystem::second_derivative(std::span<const double> v, double vpp0, std::span<double> out) const {
    const std::size_t m = grid_.intervals;
    auto interior = out.subspan(1, m - 1);
    kernels::active().second_difference(interior, v.first(m + 1), scale_);
    interior[0] -= vpp0;
    lu_.solve(interior);
    out[0] = vpp0;
    out[m] = 0.0;
}

std::vector<double> second_derivative_u(const CompactSystem& sys, std::span<const double> u) {
    std::vector<double> out(sys.size() + 1, 0.0);
    sys.second_derivative(u, out);
    return out;
}

std::vector<double> second_derivative_v(const DeltaSystem& sys, std::span<const double> v, double v0, double vpp0) {
    if (v[0] != v0) throw SolverError(ErrorKind::state_corruption, "delta boundary sample differs from v0");
    std::vector<double> out(sys.grid().node_count(), 0.0);
    sys.second_derivative(v, vpp0, out);
    return out;
}

void rhs_u(std::span<const double> u, std::span<const double> v, std::span<const double> u_pp, double omega,
           const MarketParams& params, std::span<double> out) {
    const std::size_t m = u.size() - 1;
    const double half_s2 = 0.5 * params.volatility * params.volatility;
    kernels::active().reaction_diffusion(out.first(m), u_pp.first(m), v.first(m), u.first(m), half_s2, omega,
                                         params.rate);
    out[m] = 0.0;
}

void rhs_v(std::span<const double> v, std::span<const double> u_pp, std::span<const double> v_pp, double omega,
           const MarketParams& params, std::span<double> out, DeltaCoupling coupling) {
    const std::size_t m = v.size() - 1;
    const double half_s2 = 0.5 * params.volatility * params.volatility;
    const double coupling_weight = coupling == DeltaCoupling::printed ? omega * half_s2 : omega;
    kernels::active().reaction_diffusion(out.subspan(1, m - 1), v_pp.subspan(1, m - 1), u_pp.subspan(1, m - 1),
                                         v.subspan(1, m - 1), half_s2, coupling_weight, params.rate);
    out[0] = 0.0;
    out[m] = 0.0;
}

}  // namespace frontfix
