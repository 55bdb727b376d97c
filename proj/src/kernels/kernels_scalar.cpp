#include <algorithm>
#include <cmath>

#include "frontfix/kernels.hpp"

namespace frontfix::kernels {

namespace {

void stage_combine(std::span<double> out, std::span<const double> base, double k,
                   std::span<const double> weights, std::span<const double* const> slopes) {
    const std::size_t n = out.size();
    std::size_t first = 0;
    while (first < weights.size() && weights[first] == 0.0) ++first;
    if (first == weights.size()) {
        std::copy(base.begin(), base.begin() + static_cast<std::ptrdiff_t>(n), out.begin());
        return;
    }
    for (std::size_t i = 0; i < n; ++i) {
        double acc = weights[first] * slopes[first][i];
        for (std::size_t j = first + 1; j < weights.size(); ++j) {
            if (weights[j] == 0.0) continue;
            acc = acc + weights[j] * slopes[j][i];
        }
        out[i] = base[i] + k * acc;
    }
}

void reaction_diffusion(std::span<double> out, std::span<const double> curvature, std::span<const double> drift,
                        std::span<const double> self, double half_sigma2, double omega, double rate) {
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = (half_sigma2 * curvature[i] + omega * drift[i]) - rate * self[i];
    }
}

void second_difference(std::span<double> out, std::span<const double> f, double scale) {
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = scale * ((f[i] - 2.0 * f[i + 1]) + f[i + 2]);
    }
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

void american_rollback(std::span<double> values, std::span<double> spots, double p_up, double p_down,
                       double spot_scale, double strike) {
    for (std::size_t j = 0; j < spots.size(); ++j) {
        spots[j] = spots[j] * spot_scale;
        const double continuation = p_up * values[j] + p_down * values[j + 1];
        values[j] = std::max(continuation, strike - spots[j]);
    }
}

constexpr KernelTable kScalar{
    Isa::scalar, stage_combine, reaction_diffusion, second_difference, max_abs_diff, american_rollback,
};

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

}  // namespace frontfix::kernels
