#include "phasewave/errors.hpp"

#include <cstdio>

namespace phasewave {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::a1_violation: return "A1_VIOLATION";
        case ErrorCode::a2_violation: return "A2_VIOLATION";
        case ErrorCode::nu_zero: return "NU_ZERO";
        case ErrorCode::dimension_mismatch: return "DIMENSION_MISMATCH";
        case ErrorCode::singular_entry: return "SINGULAR_ENTRY";
        case ErrorCode::convergence_domain: return "CONVERGENCE_DOMAIN";
        case ErrorCode::resonance: return "RESONANCE";
        case ErrorCode::non_convergence: return "NON_CONVERGENCE";
        case ErrorCode::conditioning: return "CONDITIONING";
        case ErrorCode::degenerate_amplitude: return "DEGENERATE_AMPLITUDE";
        case ErrorCode::hypothesis_violation: return "HYPOTHESIS_VIOLATION";
        case ErrorCode::coupling_failure: return "COUPLING_FAILURE";
        case ErrorCode::internal_inconsistency: return "INTERNAL_INCONSISTENCY";
        case ErrorCode::domain_error: return "DOMAIN_ERROR";
        case ErrorCode::blow_up: return "BLOW_UP";
        case ErrorCode::schema_error: return "SCHEMA_ERROR";
        case ErrorCode::io_error: return "IO_ERROR";
    }
    return "UNKNOWN";
}

std::string num_str(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace phasewave
