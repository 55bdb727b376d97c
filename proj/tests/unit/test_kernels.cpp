#include <cstring>
#include <random>
#include <vector>

#include "doctest.h"
#include "frontfix/error.hpp"
#include "frontfix/kernels.hpp"

using namespace frontfix;
using namespace frontfix::kernels;

namespace {

std::vector<double> random_vector(std::size_t n, std::mt19937& rng, double lo = -10.0, double hi = 10.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = dist(rng);
    return v;
}

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

const KernelTable* vector_table() {
    const KernelTable* t = avx2_table();
    return t && cpu_supports(Isa::avx2) ? t : nullptr;
}

}  // namespace

TEST_CASE("scalar table is always available") {
    CHECK(scalar_table().isa == Isa::scalar);
    CHECK(&table_for(Isa::scalar) == &scalar_table());
    CHECK(to_string(Isa::avx2) == "avx2");
    if (!vector_table()) CHECK_THROWS_AS(table_for(Isa::avx2), SolverError);
}

TEST_CASE("scalar kernels") {
    const auto& s = scalar_table();
    std::vector<double> out(3);
    const std::vector<double> f{1.0, 4.0, 9.0, 16.0, 25.0};
    s.second_difference(out, f, 0.5);
    CHECK(out == std::vector<double>{1.0, 1.0, 1.0});
    CHECK(s.max_abs_diff(f, std::vector<double>{1.0, 4.0, 2.0, 16.0, 25.5}) == 7.0);

    const std::vector<double> base{1.0, 1.0};
    const std::vector<double> s0{1.0, 2.0}, s1{3.0, 4.0};
    const std::vector<const double*> slopes{s0.data(), s1.data()};
    const std::vector<double> weights{0.5, 0.0};
    std::vector<double> combined(2);
    s.stage_combine(combined, base, 0.1, weights, slopes);
    CHECK(combined[0] == doctest::Approx(1.05));
    CHECK(combined[1] == doctest::Approx(1.1));

    std::vector<double> values{0.0, 1.0, 4.0};
    std::vector<double> spots{100.0, 90.0};
    s.american_rollback(values, spots, 0.5, 0.4, 1.0, 95.0);
    CHECK(values[0] == doctest::Approx(0.4));
    CHECK(values[1] == doctest::Approx(5.0));  // exercise wins
}

TEST_CASE("vector kernels match scalar kernels bit for bit") {
    const KernelTable* v = vector_table();
    if (!v) {
        MESSAGE("AVX2 not available on this host; skipping");
        return;
    }
    const auto& s = scalar_table();
    std::mt19937 rng(2024);
    for (std::size_t n : {1u, 3u, 4u, 5u, 7u, 8u, 31u, 64u, 301u}) {
        CAPTURE(n);
        {
            const auto base = random_vector(n, rng);
            std::vector<std::vector<double>> slope_store;
            std::vector<const double*> slopes;
            for (int i = 0; i < 7; ++i) slope_store.push_back(random_vector(n, rng));
            for (auto& x : slope_store) slopes.push_back(x.data());
            const std::vector<double> weights{35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84, 0.0};
            std::vector<double> a(n), b(n);
            s.stage_combine(a, base, 1.3e-3, weights, slopes);
            v->stage_combine(b, base, 1.3e-3, weights, slopes);
            CHECK(bit_equal(a, b));
        }
        {
            const auto c = random_vector(n, rng), d = random_vector(n, rng), self = random_vector(n, rng);
            std::vector<double> a(n), b(n);
            s.reaction_diffusion(a, c, d, self, 0.02, -0.7, 0.05);
            v->reaction_diffusion(b, c, d, self, 0.02, -0.7, 0.05);
            CHECK(bit_equal(a, b));
        }
        {
            const auto f = random_vector(n + 2, rng);
            std::vector<double> a(n), b(n);
            s.second_difference(a, f, 1.2e5);
            v->second_difference(b, f, 1.2e5);
            CHECK(bit_equal(a, b));
            const auto g = random_vector(n + 2, rng);
            CHECK(s.max_abs_diff(f, g) == v->max_abs_diff(f, g));
        }
        {
            auto values_a = random_vector(n + 1, rng, 0.0, 50.0);
            auto spots_a = random_vector(n, rng, 50.0, 150.0);
            auto values_b = values_a;
            auto spots_b = spots_a;
            s.american_rollback(values_a, spots_a, 0.501, 0.497, 1.002, 100.0);
            v->american_rollback(values_b, spots_b, 0.501, 0.497, 1.002, 100.0);
            CHECK(bit_equal(values_a, values_b));
            CHECK(bit_equal(spots_a, spots_b));
        }
    }
}
