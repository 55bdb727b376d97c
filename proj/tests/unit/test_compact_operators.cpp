#include <cmath>
#include <numbers>

#include "doctest.h"
#include "frontfix/compact_operators.hpp"
#include "frontfix/error.hpp"

using namespace frontfix;

namespace {

constexpr double kXmax = 3.0;
constexpr double kPi = std::numbers::pi;

// Smooth test function with f(x_max) = f''(x_max) = 0 and f(0) != 0.
double f(double x) { return std::cos(kPi * x / (2.0 * kXmax)) + std::sin(kPi * x / kXmax); }
double fp(double x) {
    return -kPi / (2.0 * kXmax) * std::sin(kPi * x / (2.0 * kXmax)) + kPi / kXmax * std::cos(kPi * x / kXmax);
}
double fpp(double x) {
    const double a = kPi / (2.0 * kXmax), b = kPi / kXmax;
    return -a * a * std::cos(a * x) - b * b * std::sin(b * x);
}

// Truncation error of each row of B f'' = A f + load with exact samples.
std::vector<double> row_truncation(double h) {
    const GridSpec grid = GridSpec::with_spacing(kXmax, h);
    const CompactSystem sys(grid, f(0.0) - fp(0.0));
    std::vector<double> u(grid.node_count()), exact(grid.intervals), lhs(grid.intervals), rhs(grid.intervals);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = f(grid.node(i));
    u.back() = 0.0;
    for (std::size_t i = 0; i < exact.size(); ++i) exact[i] = fpp(grid.node(i));
    sys.B().multiply(exact, lhs);
    sys.right_side(u, rhs);
    for (std::size_t i = 0; i < lhs.size(); ++i) lhs[i] -= rhs[i];
    return lhs;
}

struct Errors {
    double boundary;
    double interior;
};

Errors value_errors(double h) {
    const GridSpec grid = GridSpec::with_spacing(kXmax, h);
    const CompactSystem sys(grid, f(0.0) - fp(0.0));
    std::vector<double> u(grid.node_count());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = f(grid.node(i));
    u.back() = 0.0;
    const auto upp = second_derivative_u(sys, u);
    Errors e{std::abs(upp[0] - fpp(0.0)), 0.0};
    // The third-order boundary row pollutes the first few nodes; B^-1 damps it
    // by about a factor 10 per node, so measure from x = 0.25 on.
    for (std::size_t i = 1; i < grid.intervals; ++i) {
        if (grid.node(i) < 0.25) continue;
        e.interior = std::max(e.interior, std::abs(upp[i] - fpp(grid.node(i))));
    }
    return e;
}

double delta_error(double h) {
    const GridSpec grid = GridSpec::with_spacing(kXmax, h);
    const DeltaSystem sys(grid);
    std::vector<double> v(grid.node_count());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid.node(i));
    v.back() = 0.0;
    const auto vpp = second_derivative_v(sys, v, v[0], fpp(0.0));
    double e = 0.0;
    for (std::size_t i = 1; i < grid.intervals; ++i) e = std::max(e, std::abs(vpp[i] - fpp(grid.node(i))));
    return e;
}

}  // namespace

TEST_CASE("Robin closure row") {
    const RobinRow row = robin_row_closure(0.1);
    CHECK(row.a_row[0] == doctest::Approx(1200.0 * -2.2));
    CHECK(row.a_row[1] == doctest::Approx(2400.0));
    CHECK(row.load_per_strike * 100.0 == doctest::Approx(24000.0));
    for (double h : {0.1, 0.013, 0.5}) {
        const RobinRow r = robin_row_closure(h);
        CHECK(r.b_row[0] == 7.0);
        CHECK(r.b_row[1] == 6.0);
        CHECK(r.b_row[2] == -1.0);
    }
    CHECK_THROWS_AS(robin_row_closure(0.0), SolverError);
}

TEST_CASE("interior rows are fourth-order, the Robin row third-order") {
    const auto coarse = row_truncation(0.05);
    const auto fine = row_truncation(0.025);
    double interior_coarse = 0.0, interior_fine = 0.0;
    for (std::size_t i = 1; i < coarse.size(); ++i) interior_coarse = std::max(interior_coarse, std::abs(coarse[i]));
    for (std::size_t i = 1; i < fine.size(); ++i) interior_fine = std::max(interior_fine, std::abs(fine[i]));
    CHECK(std::log2(interior_coarse / interior_fine) >= 3.8);
    CHECK(std::log2(std::abs(coarse[0] / fine[0])) >= 2.8);
}

TEST_CASE("compact value operator converges at fourth order inside, third at the boundary") {
    const Errors coarse = value_errors(0.05);
    const Errors fine = value_errors(0.025);
    const Errors finer = value_errors(0.0125);
    CHECK(std::log2(coarse.interior / fine.interior) >= 3.8);
    CHECK(std::log2(fine.interior / finer.interior) >= 3.8);
    CHECK(std::log2(coarse.boundary / fine.boundary) >= 2.8);
    CHECK(std::log2(fine.boundary / finer.boundary) >= 2.8);
}

TEST_CASE("compact delta operator converges at fourth order") {
    const double e1 = delta_error(0.05), e2 = delta_error(0.025), e3 = delta_error(0.0125);
    CHECK(std::log2(e1 / e2) >= 3.8);
    CHECK(std::log2(e2 / e3) >= 3.8);
}

TEST_CASE("homogeneous inputs give zero curvature") {
    const GridSpec grid = GridSpec::with_spacing(kXmax, 0.1);
    const std::vector<double> zero(grid.node_count(), 0.0);
    for (double x : second_derivative_u(CompactSystem(grid, 0.0), zero)) CHECK(x == 0.0);
    for (double x : second_derivative_v(DeltaSystem(grid), zero, 0.0, 0.0)) CHECK(x == 0.0);
    CHECK_THROWS_AS(second_derivative_v(DeltaSystem(grid), zero, 1.0, 0.0), SolverError);
}

TEST_CASE("semi-discrete right-hand sides isolate their terms") {
    const MarketParams heat{100.0, 0.0, 0.0, 0.3, 0.5};
    const std::vector<double> u{1.0, 2.0, 3.0, 0.0};
    const std::vector<double> v{-4.0, 5.0, 6.0, 0.0};
    const std::vector<double> upp{0.5, -1.0, 2.0, 0.0};
    const std::vector<double> vpp{1.5, 3.0, -2.0, 0.0};
    std::vector<double> out(4);
    rhs_u(u, v, upp, 0.0, heat, out);
    for (std::size_t i = 0; i < 3; ++i) CHECK(out[i] == 0.045 * upp[i]);
    CHECK(out[3] == 0.0);
    rhs_v(v, upp, vpp, 0.0, heat, out);
    CHECK(out[0] == 0.0);
    CHECK(out[1] == 0.045 * vpp[1]);
    CHECK(out[2] == 0.045 * vpp[2]);
    CHECK(out[3] == 0.0);

    const MarketParams full{100.0, 0.05, 0.0, 0.2, 0.5};
    rhs_u(u, v, upp, -0.3, full, out);
    CHECK(out[1] == doctest::Approx(0.02 * -1.0 - 0.3 * 5.0 - 0.05 * 2.0));
    rhs_v(v, upp, vpp, -0.3, full, out, DeltaCoupling::chain_rule);
    CHECK(out[2] == doctest::Approx(0.02 * -2.0 - 0.3 * 2.0 - 0.05 * 6.0));
    rhs_v(v, upp, vpp, -0.3, full, out, DeltaCoupling::printed);
    CHECK(out[2] == doctest::Approx(0.02 * -2.0 - 0.3 * 0.02 * 2.0 - 0.05 * 6.0));
}
