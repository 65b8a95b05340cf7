#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace phasewave {

/// Machine-readable error categories; the CLI maps these to {code, message,
/// context} JSON on standard error with exit code 1.
enum class ErrorCode {
    a1_violation,
    a2_violation,
    nu_zero,
    dimension_mismatch,
    singular_entry,
    convergence_domain,
    resonance,
    non_convergence,
    conditioning,
    degenerate_amplitude,
    hypothesis_violation,
    coupling_failure,
    internal_inconsistency,
    domain_error,
    blow_up,
    schema_error,
    io_error,
};

const char* error_code_name(ErrorCode code);

/// Full-precision number formatting for error contexts.
std::string num_str(double v);

/// Domain error with a code and optional key/value context pairs.
class PwError : public std::runtime_error {
  public:
    PwError(ErrorCode code, const std::string& message,
            std::vector<std::pair<std::string, std::string>> context = {})
        : std::runtime_error(message), code_(code), context_(std::move(context)) {}

    ErrorCode code() const { return code_; }
    const std::vector<std::pair<std::string, std::string>>& context() const { return context_; }

  private:
    ErrorCode code_;
    std::vector<std::pair<std::string, std::string>> context_;
};

}  // namespace phasewave
