#include "frontfix/error.hpp"

namespace frontfix {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::domain: return "domain";
        case ErrorKind::state_corruption: return "state-corruption";
        case ErrorKind::model_assumption: return "model-assumption";
        case ErrorKind::division_by_zero: return "division-by-zero";
        case ErrorKind::nonconvergence: return "nonconvergence";
        case ErrorKind::root_selection: return "root-selection";
        case ErrorKind::assembly: return "assembly";
        case ErrorKind::unknown_tableau: return "unknown-tableau";
        case ErrorKind::tableau_defect: return "tableau-defect";
        case ErrorKind::divergence: return "divergence";
        case ErrorKind::stalled_step: return "stalled-step";
        case ErrorKind::step_size: return "step-size";
        case ErrorKind::picard_nonconvergence: return "picard-nonconvergence";
        case ErrorKind::invalid_config: return "invalid-config";
        case ErrorKind::probe_bracket: return "probe-bracket";
    }
    return "unknown";
}

namespace {

std::string decorate(ErrorKind kind, const std::string& message, std::optional<double> tau) {
    std::string out{to_string(kind)};
    out += ": ";
    out += message;
    if (tau) {
        out += " (tau=" + std::to_string(*tau) + ")";
    }
    return out;
}

}  // namespace

SolverError::SolverError(ErrorKind kind, const std::string& message, std::optional<double> tau)
    : std::runtime_error(decorate(kind, message, tau)), kind_(kind), tau_(tau) {}

}  // namespace frontfix
