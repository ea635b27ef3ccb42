#pragma once

#include <stdexcept>
#include <string>

namespace qobesity {

enum class ErrorCode {
    InvalidState,
    IndexOutOfRange,
    PatternMismatch,
    UnphysicalParams,
    SingularMarginal,
    ZeroProbability,
    FilterAnnihilatesState,
    FilterUndefined,
    SingularOperator,
    PreconditionViolation,
    NotBellDiagonal,
    InvalidGrid,
    DegenerateInput,
    InvalidChain,
    MalformedInput,
    QuadratureFailure,
    EigensolverFailure,
};

inline const char* to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidState: return "invalid-state";
    case ErrorCode::IndexOutOfRange: return "index-out-of-range";
    case ErrorCode::PatternMismatch: return "pattern-mismatch";
    case ErrorCode::UnphysicalParams: return "unphysical-params";
    case ErrorCode::SingularMarginal: return "singular-marginal";
    case ErrorCode::ZeroProbability: return "zero-probability";
    case ErrorCode::FilterAnnihilatesState: return "filter-annihilates-state";
    case ErrorCode::FilterUndefined: return "filter-undefined";
    case ErrorCode::SingularOperator: return "singular-operator";
    case ErrorCode::PreconditionViolation: return "precondition-violation";
    case ErrorCode::NotBellDiagonal: return "not-bell-diagonal";
    case ErrorCode::InvalidGrid: return "invalid-grid";
    case ErrorCode::DegenerateInput: return "degenerate-input";
    case ErrorCode::InvalidChain: return "invalid-chain";
    case ErrorCode::MalformedInput: return "malformed-input";
    case ErrorCode::QuadratureFailure: return "quadrature-failure";
    case ErrorCode::EigensolverFailure: return "eigensolver-failure";
    }
    return "unknown";
}

/// Numerical failures (quadrature, eigensolver) map to CLI exit code 3,
/// everything else is a validation failure (exit code 2).
inline bool is_numerical(ErrorCode code) {
    return code == ErrorCode::QuadratureFailure || code == ErrorCode::EigensolverFailure;
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }
    int exit_code() const noexcept { return is_numerical(code_) ? 3 : 2; }

private:
    ErrorCode code_;
};

} // namespace qobesity
