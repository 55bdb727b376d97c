#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "frontfix/error.hpp"
#include "frontfix/tableau.hpp"

using namespace frontfix;

namespace {

constexpr PairId kBundled[] = {PairId::DP, PairId::CK, PairId::BS, PairId::ST};

// One step of y' = -y with the pair; returns the fifth- and fourth-order results.
std::pair<double, double> scalar_step(const ButcherPair& p, double y0, double k) {
    std::vector<double> slope(p.stages());
    for (std::size_t i = 0; i < p.stages(); ++i) {
        double y = y0;
        for (std::size_t j = 0; j < i; ++j) y += k * p.a[i][j] * slope[j];
        slope[i] = -y;
    }
    double y5 = y0, y4 = y0;
    for (std::size_t i = 0; i < p.stages(); ++i) {
        y5 += k * p.b5[i] * slope[i];
        y4 += k * p.b4[i] * slope[i];
    }
    return {y5, y4};
}

double integrate(const ButcherPair& p, double k, bool high) {
    double y = 1.0;
    const int n = static_cast<int>(std::lround(1.0 / k));
    for (int i = 0; i < n; ++i) {
        const auto [y5, y4] = scalar_step(p, y, k);
        y = high ? y5 : y4;
    }
    return y;
}

}  // namespace

TEST_CASE("bundled pairs satisfy the Butcher invariants") {
    for (PairId id : kBundled) {
        const ButcherPair& p = tableau(id);
        CAPTURE(p.name);
        CHECK_NOTHROW(p.validate());
        REQUIRE(p.a.size() == p.stages());
        double s5 = 0.0, s4 = 0.0;
        for (std::size_t i = 0; i < p.stages(); ++i) {
            REQUIRE(p.a[i].size() == i);
            double row = 0.0;
            for (double a : p.a[i]) row += a;
            CHECK(std::abs(row - p.c[i]) <= 1e-12);
            s5 += p.b5[i];
            s4 += p.b4[i];
        }
        CHECK(std::abs(s5 - 1.0) <= 1e-12);
        CHECK(std::abs(s4 - 1.0) <= 1e-12);
        for (int q = 1; q <= 3; ++q) {
            double m5 = 0.0, m4 = 0.0;
            for (std::size_t i = 0; i < p.stages(); ++i) {
                m5 += p.b5[i] * std::pow(p.c[i], q);
                m4 += p.b4[i] * std::pow(p.c[i], q);
            }
            CHECK(std::abs(m5 - 1.0 / (q + 1)) <= 1e-12);
            CHECK(std::abs(m4 - 1.0 / (q + 1)) <= 1e-12);
        }
    }
}

TEST_CASE("first-same-as-last pairs") {
    CHECK(tableau(PairId::DP).first_same_as_last());
    CHECK(tableau(PairId::BS).first_same_as_last());
    CHECK_FALSE(tableau(PairId::CK).first_same_as_last());
}

TEST_CASE("pair ids") {
    CHECK(parse_pair_id("DP") == PairId::DP);
    CHECK(parse_pair_id("ST") == PairId::ST);
    CHECK_FALSE(parse_pair_id("RK45").has_value());
    CHECK(to_string(PairId::CK) == "CK");
    try {
        tableau(PairId::PP);
        FAIL("PP is not bundled");
    } catch (const SolverError& e) {
        CHECK(e.kind() == ErrorKind::unknown_tableau);
    }
}

TEST_CASE("exponential decay through one Dormand-Prince step") {
    const auto [y5, y4] = scalar_step(tableau(PairId::DP), 1.0, 0.1);
    CHECK(std::abs(y5 - std::exp(-0.1)) < 1e-9);
    const double estimate = std::abs(y5 - y4);
    CHECK(estimate > 1e-10);
    CHECK(estimate < 1e-7);
}

TEST_CASE("fifth-order weights converge at fifth order on y' = -y") {
    for (PairId id : kBundled) {
        const ButcherPair& p = tableau(id);
        CAPTURE(p.name);
        const double e1 = std::abs(integrate(p, 0.1, true) - std::exp(-1.0));
        const double e2 = std::abs(integrate(p, 0.05, true) - std::exp(-1.0));
        CHECK(std::log2(e1 / e2) >= 4.7);
        const double f1 = std::abs(integrate(p, 0.1, false) - std::exp(-1.0));
        const double f2 = std::abs(integrate(p, 0.05, false) - std::exp(-1.0));
        CHECK(std::log2(f1 / f2) >= 3.7);
    }
}

TEST_CASE("pair files") {
    const ButcherPair p = load_pair(std::string(FRONTFIX_SOURCE_DIR) + "/configs/pairs/file_pair_example.json");
    CHECK(p.id == PairId::PP);
    CHECK(p.stages() == 7);
    CHECK(p.first_same_as_last());

    const std::string broken = (std::filesystem::temp_directory_path() / "frontfix_broken_pair.json").string();
    {
        std::ofstream out(broken);
        out << R"({"id": "PP", "c": [0, 0.5], "a": [[], [0.5]], "b5": [0.0, 1.0], "b4": [0.6, 0.5]})";
    }
    try {
        load_pair(broken);
        FAIL("expected tableau_defect");
    } catch (const SolverError& e) {
        CHECK(e.kind() == ErrorKind::tableau_defect);
    }
    CHECK_THROWS_AS(load_pair("missing_pair.json"), SolverError);
}
