#include <random>

#include "doctest.h"
#include "frontfix/banded.hpp"
#include "frontfix/error.hpp"

using namespace frontfix;

namespace {

BandedMatrix random_dominant(std::size_t n, std::mt19937& rng) {
    std::uniform_real_distribution<double> off(-1.0, 1.0);
    BandedMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        if (i > 0) row += std::abs(m.at(i, i - 1) = off(rng));
        if (i + 1 < n) row += std::abs(m.at(i, i + 1) = off(rng));
        if (i + 2 < n) row += std::abs(m.at(i, i + 2) = off(rng));
        m.at(i, i) = row + 1.0 + std::abs(off(rng));
    }
    return m;
}

}  // namespace

TEST_CASE("banded solve leaves a small residual") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(-5.0, 5.0);
    for (std::size_t n : {1u, 2u, 3u, 17u, 300u}) {
        const BandedMatrix m = random_dominant(n, rng);
        std::vector<double> rhs(n), x(n), back(n);
        for (auto& v : rhs) v = dist(rng);
        x = rhs;
        BandedLU(m).solve(x);
        m.multiply(x, back);
        for (std::size_t i = 0; i < n; ++i) CHECK(back[i] == doctest::Approx(rhs[i]).epsilon(1e-12).scale(5.0));
    }
}

TEST_CASE("LU reconstructs the matrix") {
    std::mt19937 rng(11);
    const BandedMatrix m = random_dominant(40, rng);
    const BandedMatrix r = BandedLU(m).reconstruct();
    for (std::size_t i = 0; i < 40; ++i) {
        for (std::size_t j = (i == 0 ? 0 : i - 1); j < std::min<std::size_t>(40, i + 3); ++j) {
            CHECK(r.at(i, j) == doctest::Approx(m.at(i, j)).epsilon(1e-13).scale(1.0));
        }
    }
}

TEST_CASE("zero pivot is an assembly error") {
    BandedMatrix m(3);
    m.at(1, 1) = 1.0;
    m.at(2, 2) = 1.0;
    try {
        BandedLU lu(m);
        FAIL("expected an assembly error");
    } catch (const SolverError& e) {
        CHECK(e.kind() == ErrorKind::assembly);
    }
}
