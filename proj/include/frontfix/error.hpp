#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace frontfix {

/// Failure categories raised by the solver stack. The harness maps these to
/// report rows and exit codes; the adaptive integrator uses them to decide
/// whether a trial step can be retried with a smaller step size.
enum class ErrorKind {
    domain,
    state_corruption,
    model_assumption,
    division_by_zero,
    nonconvergence,
    root_selection,
    assembly,
    unknown_tableau,
    tableau_defect,
    divergence,
    stalled_step,
    step_size,
    picard_nonconvergence,
    invalid_config,
    probe_bracket,
};

std::string_view to_string(ErrorKind kind) noexcept;

class SolverError : public std::runtime_error {
public:
    SolverError(ErrorKind kind, const std::string& message,
                std::optional<double> tau = std::nullopt);

    ErrorKind kind() const noexcept { return kind_; }

    /// Backward time at which the failure happened, when known.
    std::optional<double> tau() const noexcept { return tau_; }

private:
    ErrorKind kind_;
    std::optional<double> tau_;
};

}  // namespace frontfix
