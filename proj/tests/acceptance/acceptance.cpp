// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only
// when every criterion passes. Reports for each table land under --out.

#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "frontfix/binomial.hpp"
#include "frontfix/boundary_analytics.hpp"
#include "frontfix/compact_operators.hpp"
#include "frontfix/error.hpp"
#include "frontfix/harness/tables.hpp"
#include "frontfix/rk_embedded.hpp"
#include "frontfix/tableau.hpp"

using namespace frontfix;
using namespace frontfix::harness;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
    bool pass = true;
    std::vector<std::string> failures;
    std::string summary;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            failures.push_back(what);
        }
    }
};

std::string describe(const Gate& g) {
    std::ostringstream out;
    out << g.name << " measured " << format_number(g.measured);
    switch (g.kind) {
        case GateKind::within: out << " target " << format_number(g.target) << " +/- " << format_number(g.tolerance); break;
        case GateKind::at_least: out << " needs >= " << format_number(g.target); break;
        case GateKind::at_most: out << " needs <= " << format_number(g.target); break;
        case GateKind::holds: out << " (" << g.note << ")"; break;
    }
    return out.str();
}

// Every gate of `report` whose name passes `select`.
Outcome from_gates(const Report& report, const std::function<bool(const std::string&)>& select) {
    Outcome o;
    std::size_t count = 0;
    for (const auto& g : report.gates) {
        if (!select(g.name)) continue;
        ++count;
        o.require(g.pass, describe(g));
    }
    o.require(count > 0, "no gates selected");
    o.summary = std::to_string(count - o.failures.size()) + "/" + std::to_string(count) + " gates";
    return o;
}

bool contains(const std::string& s, const char* part) { return s.find(part) != std::string::npos; }

void print(int number, const char* title, const Outcome& o, double seconds) {
    std::cout << "criterion " << number << " (" << title << "): " << (o.pass ? "PASS" : "FAIL") << "  ["
              << o.summary << ", " << format_number(std::round(seconds * 10.0) / 10.0) << " s]\n";
    for (const auto& f : o.failures) std::cout << "    " << f << '\n';
    std::cout.flush();
}

void write_report(const Report& r, const std::string& out) {
    if (!out.empty()) r.write(std::filesystem::path(out) / r.name);
}

// Controller contract over the adaptive runs of criteria 3-6.
Outcome controller_contract(const std::vector<const Report*>& reports) {
    Outcome o;
    std::size_t runs = 0;
    for (const Report* r : reports) {
        for (const auto& run : r->runs) {
            if (run.stats.diverged) continue;
            ++runs;
            const auto& s = run.stats;
            o.require(s.controller_violations == 0 && s.max_accepted_error_ratio < 1.0,
                      r->name + " " + run.label + ": accepted step with error ratio " +
                          format_number(s.max_accepted_error_ratio));
            o.require(s.tau_of_min_step <= 0.05 * run.maturity,
                      r->name + " " + run.label + ": min step " + format_number(s.min_step) + " at tau " +
                          format_number(s.tau_of_min_step));
        }
    }
    o.require(runs > 0, "no adaptive runs");
    o.summary = std::to_string(runs) + " runs";
    return o;
}

// ---- property suite ----------------------------------------------------------

constexpr double kPi = std::numbers::pi;

double smooth(double x) { return std::cos(kPi * x / 6.0) + std::sin(kPi * x / 3.0); }
double smooth_slope(double x) { return -kPi / 6.0 * std::sin(kPi * x / 6.0) + kPi / 3.0 * std::cos(kPi * x / 3.0); }
double smooth_curvature(double x) {
    return -kPi * kPi / 36.0 * std::cos(kPi * x / 6.0) - kPi * kPi / 9.0 * std::sin(kPi * x / 3.0);
}

// Max interior error (x >= 0.25) and boundary error of the compact value operator.
std::pair<double, double> compact_errors(double h) {
    const GridSpec grid = GridSpec::with_spacing(3.0, h);
    const CompactSystem sys(grid, smooth(0.0) - smooth_slope(0.0));
    std::vector<double> u(grid.node_count());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = smooth(grid.node(i));
    u.back() = 0.0;
    const auto upp = second_derivative_u(sys, u);
    double interior = 0.0;
    for (std::size_t i = 1; i < grid.intervals; ++i) {
        if (grid.node(i) >= 0.25) interior = std::max(interior, std::abs(upp[i] - smooth_curvature(grid.node(i))));
    }
    return {interior, std::abs(upp[0] - smooth_curvature(0.0))};
}

Outcome property_suite() {
    Outcome o;
    std::size_t checks = 0;
    auto require = [&](bool ok, const std::string& what) {
        ++checks;
        o.require(ok, what);
    };

    for (PairId id : {PairId::DP, PairId::CK, PairId::BS, PairId::ST}) {
        bool ok = true;
        try {
            tableau(id).validate();
        } catch (const SolverError&) {
            ok = false;
        }
        require(ok, "Butcher invariants of " + std::string(to_string(id)));
    }

    const auto [i1, b1] = compact_errors(0.05);
    const auto [i2, b2] = compact_errors(0.025);
    const auto [i3, b3] = compact_errors(0.0125);
    const double interior_order = std::min(std::log2(i1 / i2), std::log2(i2 / i3));
    const double boundary_order = std::min(std::log2(b1 / b2), std::log2(b2 / b3));
    require(interior_order >= 3.8, "compact interior order " + format_number(interior_order));
    require(boundary_order >= 2.8, "compact boundary-row order " + format_number(boundary_order));

    const double factorial[] = {1.0, 1.0, 2.0, 6.0};
    for (const auto& c : {ExtrapolationCoeffs::fourth_order(1.0), ExtrapolationCoeffs::third_order(1.0)}) {
        const std::size_t top = c.order == ExpansionOrder::fourth ? 6 : 5;
        for (std::size_t p = 0; p <= top; ++p) {
            double sum = p == 0 ? c.constant_weight() : 0.0, scale = std::abs(sum);
            for (std::size_t j = 0; j < c.sample_count; ++j) {
                const double term = c.alpha[j] * std::pow(static_cast<double>(j + 1), static_cast<double>(p));
                sum += term;
                scale += std::abs(term);
            }
            const double expected = p >= 1 && p <= 3 ? c.gamma[p - 1] * factorial[p] : 0.0;
            require(std::abs(sum - expected) <= 4e-16 * scale,
                    "extrapolation identity, power " + std::to_string(p) + ", residual " +
                        format_number(sum - expected));
        }
    }

    // Quadratic root, Robin identity and monotone boundary along an adaptive run.
    const MarketParams params{100.0, 0.05, 0.03, 0.2, 0.5};
    const SemiDiscrete system(params, GridSpec::with_spacing(3.0, 0.01));
    AdaptiveOptions opts;
    opts.snapshot_every = 1;
    const auto run = integrate_adaptive(system, tableau(PairId::DP), initial_state(params, system.grid()), 0.5, opts);
    double worst_residual = 0.0, worst_robin = 0.0, worst_rise = -1.0;
    double previous = params.strike;
    for (const auto& snap : run.snapshots) {
        const BoundarySlope b = xi_and_omega(snap.u, 0.01, snap.f_b, params, system.coeffs());
        const auto& q = b.quadratic;
        const double scale = std::abs(q.g2 * b.xi * b.xi) + std::abs(q.g1 * b.xi) + std::abs(q.g0);
        worst_residual = std::max(worst_residual, std::abs(q.residual(b.xi)) / scale);
        worst_robin = std::max(worst_robin, std::abs(snap.v[0] - snap.u[0] + params.strike));
        worst_rise = std::max(worst_rise, snap.f_b - previous);
        previous = snap.f_b;
    }
    require(worst_residual <= 1e-9, "quadratic root relative residual " + format_number(worst_residual));
    // exact up to the one rounding in f_b = K - u0
    require(worst_robin <= 2.0 * std::numeric_limits<double>::epsilon() * params.strike,
            "Robin identity defect " + format_number(worst_robin));
    require(worst_rise <= 0.0, "boundary rose by " + format_number(worst_rise));

    std::mt19937 rng(20240611);
    std::uniform_real_distribution<double> rate(0.0, 0.1), vol(0.1, 0.6), mat(0.05, 2.0), spot(60.0, 140.0),
        share(0.0, 1.0);
    std::size_t dominated = 0;
    for (int draw = 0; draw < 50; ++draw) {
        MarketParams p{100.0, rate(rng), 0.0, vol(rng), mat(rng)};
        p.dividend = share(rng) * p.rate;
        const double s = spot(rng);
        const double american = binomial_put(p, s, TreeConfig{2000, TreeMethod::CRR}).price;
        if (american >= european_put(p, s) - 1e-2 && american >= std::max(p.strike - s, 0.0) - 1e-10) ++dominated;
    }
    require(dominated == 50, "American >= European on " + std::to_string(dominated) + "/50 draws");

    o.summary = std::to_string(checks - o.failures.size()) + "/" + std::to_string(checks) + " checks";
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    std::string out;
    bool full = false;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--out") == 0 && i + 1 < argc) out = argv[++i];
        else if (std::strcmp(argv[i], "--full-protocol") == 0) full = true;
        else {
            std::cerr << "usage: acceptance [--out DIR] [--full-protocol]\n";
            return 2;
        }
    }
    TableOptions opts;
    opts.full_protocol = full;
    bool all = true;

    try {
        auto t = Clock::now();
        const Report t1 = table1(opts);
        write_report(t1, out);
        Outcome c1 = from_gates(t1, [](const std::string&) { return true; });
        all &= c1.pass;
        print(1, "spatial order, RK4", c1, seconds_since(t));

        t = Clock::now();
        const Report t2 = table2(opts);
        write_report(t2, out);
        Outcome c2 = from_gates(t2, [](const std::string&) { return true; });
        all &= c2.pass;
        print(2, "spatial order, Crank-Nicolson", c2, seconds_since(t));

        t = Clock::now();
        const Report t3 = table3(opts);
        write_report(t3, out);
        Outcome c3 = from_gates(t3, [](const std::string& n) { return n.starts_with("price "); });
        all &= c3.pass;
        print(3, "price table", c3, seconds_since(t));

        t = Clock::now();
        const Report t5 = table5(opts);
        write_report(t5, out);
        Outcome c4 = from_gates(t5, [](const std::string& n) { return n.starts_with("f_b(T) "); });
        all &= c4.pass;
        print(4, "boundary value", c4, seconds_since(t));

        t = Clock::now();
        const Report t6 = table6(opts);
        write_report(t6, out);
        Outcome c5 = from_gates(t6, [](const std::string& n) { return n.starts_with("delta "); });
        all &= c5.pass;
        print(5, "delta table", c5, seconds_since(t));

        Outcome c6 = from_gates(t5, [](const std::string& n) {
            return contains(n, "rhs evaluations") || contains(n, "spread");
        });
        all &= c6.pass;
        print(6, "pair efficiency ordering", c6, 0.0);

        Outcome c7 = controller_contract({&t3, &t5, &t6});
        all &= c7.pass;
        print(7, "controller contract", c7, 0.0);

        t = Clock::now();
        Outcome c8 = property_suite();
        const double elapsed = seconds_since(t);
        c8.require(elapsed <= 120.0, "property suite took " + format_number(elapsed) + " s");
        all &= c8.pass;
        print(8, "property suite", c8, elapsed);
    } catch (const std::exception& e) {
        std::cout << "acceptance aborted: " << e.what() << '\n';
        return 2;
    }
    std::cout << (all ? "all criteria pass\n" : "some criteria fail\n");
    return all ? 0 : 1;
}
