#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace frontfix {

/// DP Dormand-Prince, CK Cash-Karp, BS Bogacki-Shampine, ST the Tsitouras
/// pair, PP Papakostas-Papageorgiou (not bundled; load from a file).
enum class PairId { DP, CK, BS, ST, PP };

std::string_view to_string(PairId id) noexcept;
std::optional<PairId> parse_pair_id(std::string_view text) noexcept;

/// Explicit embedded Runge-Kutta pair. a[i] holds the i coefficients of
/// stage i (row 0 is empty).
struct ButcherPair {
    PairId id = PairId::DP;
    std::string name;
    std::vector<double> c;
    std::vector<std::vector<double>> a;
    std::vector<double> b5;
    std::vector<double> b4;
    bool fsal = false;

    std::size_t stages() const noexcept { return c.size(); }

    /// Throws SolverError(tableau_defect) unless the weights are consistent,
    /// rows sum to c, and the quadrature conditions hold through
    /// sum b5 c^3 = 1/4 (1e-12) and sum b4 c^2 = 1/3.
    void validate() const;

    /// True when the last stage reproduces the fifth-order solution so its
    /// slope can seed the next step.
    bool first_same_as_last() const noexcept;
};

/// Built-in pairs, validated on first use. PP throws unknown_tableau; its
/// coefficients are not bundled.
const ButcherPair& tableau(PairId id);

/// Reads {"id": "...", "name": "...", "c": [...], "a": [[...], ...], "b5": [...], "b4": [...]}
/// and validates it.
ButcherPair load_pair(const std::string& path);

}  // namespace frontfix
