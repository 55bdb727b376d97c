#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace frontfix::kernels {

// Data-parallel inner loops of the solvers. Every variant performs the same
// IEEE operations in the same order (no fused multiply-add), so the scalar
// reference and the vector paths agree bit for bit.

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa) noexcept;

struct KernelTable {
    Isa isa;

    /// out[i] = base[i] + k * (w_0 s_0[i] + w_1 s_1[i] + ...), skipping zero weights.
    void (*stage_combine)(std::span<double> out, std::span<const double> base, double k,
                          std::span<const double> weights, std::span<const double* const> slopes);

    /// out[i] = (half_sigma2 * curvature[i] + omega * drift[i]) - rate * self[i].
    void (*reaction_diffusion)(std::span<double> out, std::span<const double> curvature,
                               std::span<const double> drift, std::span<const double> self,
                               double half_sigma2, double omega, double rate);

    /// out[i] = scale * ((f[i] - 2 f[i+1]) + f[i+2]); f holds out.size() + 2 samples.
    void (*second_difference)(std::span<double> out, std::span<const double> f, double scale);

    /// max_i |a[i] - b[i]|.
    double (*max_abs_diff)(std::span<const double> a, std::span<const double> b);

    /// One backward level of an American put lattice over n = spots.size() nodes:
    /// spots[j] *= spot_scale, then
    /// values[j] = max(p_up * values[j] + p_down * values[j+1], strike - spots[j]).
    /// `values` holds n + 1 entries on entry.
    void (*american_rollback)(std::span<double> values, std::span<double> spots, double p_up,
                              double p_down, double spot_scale, double strike);
};

const KernelTable& scalar_table() noexcept;

/// Null when the AVX2 variant was not compiled in.
const KernelTable* avx2_table() noexcept;

bool cpu_supports(Isa isa) noexcept;

/// Throws SolverError(invalid_config) if the variant is unavailable here.
const KernelTable& table_for(Isa isa);

/// The best variant the host supports, chosen once. FRONTFIX_ISA=scalar|avx2
/// overrides the choice.
const KernelTable& active();

}  // namespace frontfix::kernels
