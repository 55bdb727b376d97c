// Compiled with -mavx2 only; selected at runtime after a cpuid check.
#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "frontfix/kernels.hpp"

namespace frontfix::kernels {

namespace {

constexpr std::size_t kLanes = 4;

void stage_combine(std::span<double> out, std::span<const double> base, double k,
                   std::span<const double> weights, std::span<const double* const> slopes) {
    const std::size_t n = out.size();
    std::size_t first = 0;
    while (first < weights.size() && weights[first] == 0.0) ++first;
    if (first == weights.size()) {
        std::copy(base.begin(), base.begin() + static_cast<std::ptrdiff_t>(n), out.begin());
        return;
    }
    const __m256d vk = _mm256_set1_pd(k);
    const __m256d w0 = _mm256_set1_pd(weights[first]);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        __m256d acc = _mm256_mul_pd(w0, _mm256_loadu_pd(slopes[first] + i));
        for (std::size_t j = first + 1; j < weights.size(); ++j) {
            if (weights[j] == 0.0) continue;
            const __m256d term = _mm256_mul_pd(_mm256_set1_pd(weights[j]), _mm256_loadu_pd(slopes[j] + i));
            acc = _mm256_add_pd(acc, term);
        }
        _mm256_storeu_pd(out.data() + i, _mm256_add_pd(_mm256_loadu_pd(base.data() + i), _mm256_mul_pd(vk, acc)));
    }
    for (; i < n; ++i) {
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
    const std::size_t n = out.size();
    const __m256d a = _mm256_set1_pd(half_sigma2);
    const __m256d w = _mm256_set1_pd(omega);
    const __m256d r = _mm256_set1_pd(rate);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const __m256d diffusion = _mm256_mul_pd(a, _mm256_loadu_pd(curvature.data() + i));
        const __m256d convection = _mm256_mul_pd(w, _mm256_loadu_pd(drift.data() + i));
        const __m256d decay = _mm256_mul_pd(r, _mm256_loadu_pd(self.data() + i));
        _mm256_storeu_pd(out.data() + i, _mm256_sub_pd(_mm256_add_pd(diffusion, convection), decay));
    }
    for (; i < n; ++i) out[i] = (half_sigma2 * curvature[i] + omega * drift[i]) - rate * self[i];
}

void second_difference(std::span<double> out, std::span<const double> f, double scale) {
    const std::size_t n = out.size();
    const __m256d s = _mm256_set1_pd(scale);
    const __m256d two = _mm256_set1_pd(2.0);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const __m256d left = _mm256_loadu_pd(f.data() + i);
        const __m256d mid = _mm256_loadu_pd(f.data() + i + 1);
        const __m256d right = _mm256_loadu_pd(f.data() + i + 2);
        const __m256d d = _mm256_add_pd(_mm256_sub_pd(left, _mm256_mul_pd(two, mid)), right);
        _mm256_storeu_pd(out.data() + i, _mm256_mul_pd(s, d));
    }
    for (; i < n; ++i) out[i] = scale * ((f[i] - 2.0 * f[i + 1]) + f[i + 2]);
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    const __m256d sign = _mm256_set1_pd(-0.0);
    __m256d m = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i));
        m = _mm256_max_pd(m, _mm256_andnot_pd(sign, d));
    }
    alignas(32) double lanes[kLanes];
    _mm256_store_pd(lanes, m);
    double result = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
    for (; i < n; ++i) result = std::max(result, std::abs(a[i] - b[i]));
    return result;
}

void american_rollback(std::span<double> values, std::span<double> spots, double p_up, double p_down,
                       double spot_scale, double strike) {
    const std::size_t n = spots.size();
    const __m256d up = _mm256_set1_pd(p_up);
    const __m256d down = _mm256_set1_pd(p_down);
    const __m256d scale = _mm256_set1_pd(spot_scale);
    const __m256d k = _mm256_set1_pd(strike);
    std::size_t j = 0;
    // values[j + 4] is read before values[j .. j + 3] is written, so the
    // in-place update sees only previous-level data.
    for (; j + kLanes <= n; j += kLanes) {
        const __m256d s = _mm256_mul_pd(_mm256_loadu_pd(spots.data() + j), scale);
        _mm256_storeu_pd(spots.data() + j, s);
        const __m256d here = _mm256_loadu_pd(values.data() + j);
        const __m256d next = _mm256_loadu_pd(values.data() + j + 1);
        const __m256d cont = _mm256_add_pd(_mm256_mul_pd(up, here), _mm256_mul_pd(down, next));
        _mm256_storeu_pd(values.data() + j, _mm256_max_pd(cont, _mm256_sub_pd(k, s)));
    }
    for (; j < n; ++j) {
        spots[j] = spots[j] * spot_scale;
        const double continuation = p_up * values[j] + p_down * values[j + 1];
        values[j] = std::max(continuation, strike - spots[j]);
    }
}

constexpr KernelTable kAvx2{
    Isa::avx2, stage_combine, reaction_diffusion, second_difference, max_abs_diff, american_rollback,
};

}  // namespace

const KernelTable* avx2_kernel_table() noexcept { return &kAvx2; }

}  // namespace frontfix::kernels
