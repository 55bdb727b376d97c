#include <cmath>

#include "doctest.h"
#include "frontfix/cn_solver.hpp"
#include "frontfix/error.hpp"

using namespace frontfix;

namespace {

const MarketParams kExample1{100.0, 0.05, 0.0, 0.2, 0.5};

DiscretizationOptions third_order() {
    DiscretizationOptions o;
    o.expansion = ExpansionOrder::third;
    return o;
}

}  // namespace

TEST_CASE("trapezoidal boundary update") {
    CHECK(cn_boundary_update(90.0, 0.0, 0.0, 1e-3) == 90.0);
    CHECK(cn_boundary_update(90.0, -0.4, -0.4, 1e-2) == doctest::Approx(90.0 * (1.0 - 0.002) / (1.0 + 0.002)));
    CHECK_THROWS_AS(cn_boundary_update(90.0, 0.0, 200.0, 1e-2), SolverError);
}

TEST_CASE("configuration checks") {
    CnConfig c;
    CHECK_NOTHROW(c.validate());
    c.k = 0.0;
    CHECK_THROWS_AS(c.validate(), SolverError);
}

TEST_CASE("steps keep the Dirichlet ties and a falling boundary") {
    const SemiDiscrete sys(kExample1, GridSpec::with_spacing(3.0, 0.05), third_order());
    CnConfig cfg;
    cfg.k = 1e-3;
    CnStepper stepper(sys, cfg);
    SolverState s = initial_state(kExample1, sys.grid());
    double previous = s.f_b;
    for (int n = 0; n < 50; ++n) {
        const std::size_t iterations = stepper.step(s);
        CHECK(iterations >= 1);
        CHECK(iterations <= cfg.picard_max_iterations);
        CHECK(s.u[0] == doctest::Approx(100.0 - s.f_b).epsilon(1e-15));
        CHECK(s.v[0] == -s.f_b);
        CHECK(s.f_b <= previous);
        previous = s.f_b;
    }
    // the compact scheme undershoots below zero inside the initial layer on
    // coarse grids; by tau = 0.5 the state is admissible again
    const SolverState end = integrate_cn(sys, s, 0.5, cfg).final_state;
    CHECK(end.tau == doctest::Approx(0.5));
    CHECK_NOTHROW(end.check_invariants());
}

TEST_CASE("Crank-Nicolson is second order in time") {
    const SemiDiscrete sys(kExample1, GridSpec::with_spacing(3.0, 0.1), third_order());
    CnConfig fine;
    fine.k = 1e-4;
    const SolverState start = integrate_cn(sys, initial_state(kExample1, sys.grid()), 0.05, fine).final_state;
    const double reference = integrate_cn(sys, start, 0.15, fine).final_state.f_b;
    auto run = [&](double k) {
        CnConfig c;
        c.k = k;
        return integrate_cn(sys, start, 0.15, c).final_state.f_b;
    };
    const double e1 = std::abs(run(1e-2) - reference);
    const double e2 = std::abs(run(5e-3) - reference);
    const double order = std::log2(e1 / e2);
    CHECK(order == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("shortened final step lands on the horizon") {
    const SemiDiscrete sys(kExample1, GridSpec::with_spacing(3.0, 0.1), third_order());
    CnConfig c;
    c.k = 3e-3;
    const auto res = integrate_cn(sys, initial_state(kExample1, sys.grid()), 0.01, c);
    CHECK(res.final_state.tau == doctest::Approx(0.01).epsilon(1e-14));
    CHECK(res.stats.steps == 4);
    CHECK(res.stats.max_boundary_rise <= 0.0);
    const SolverState one = cn_step(initial_state(kExample1, sys.grid()), 3e-3, sys, c);
    CHECK(one.tau == doctest::Approx(3e-3));
    CHECK(one.f_b < 100.0);
}
