#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vnlw {

enum class ErrorCode {
    // lattice
    DegenerateInterval,
    TooFewPoints,
    InvalidPotential,
    LengthMismatch,
    NonpositiveConstant,
    // spectra
    ConvergenceFailure,
    KOutOfRange,
    DimensionTooLarge,
    // dynamics / bipartite
    GridMismatch,
    LinearSolveFailure,
    DimensionMismatch,
    DecompositionFailure,
    UnnormalizedState,
    NonHermitianOperator,
    // scenarios
    NonNormalizedCoefficients,
    NonOrthogonalModes,
    EmptyWindow,
    UnknownScenario,
    InvalidParameters,
    // configuration / io
    SchemaViolation,
    IoFailure,
};

constexpr std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::DegenerateInterval: return "degenerate-interval";
        case ErrorCode::TooFewPoints: return "too-few-points";
        case ErrorCode::InvalidPotential: return "invalid-potential";
        case ErrorCode::LengthMismatch: return "length-mismatch";
        case ErrorCode::NonpositiveConstant: return "nonpositive-constant";
        case ErrorCode::ConvergenceFailure: return "convergence-failure";
        case ErrorCode::KOutOfRange: return "k-out-of-range";
        case ErrorCode::DimensionTooLarge: return "dimension-too-large";
        case ErrorCode::GridMismatch: return "grid-mismatch";
        case ErrorCode::LinearSolveFailure: return "linear-solve-failure";
        case ErrorCode::DimensionMismatch: return "dimension-mismatch";
        case ErrorCode::DecompositionFailure: return "decomposition-failure";
        case ErrorCode::UnnormalizedState: return "unnormalized-state";
        case ErrorCode::NonHermitianOperator: return "non-hermitian-operator";
        case ErrorCode::NonNormalizedCoefficients: return "non-normalized-coefficients";
        case ErrorCode::NonOrthogonalModes: return "non-orthogonal-modes";
        case ErrorCode::EmptyWindow: return "empty-window";
        case ErrorCode::UnknownScenario: return "unknown-scenario";
        case ErrorCode::InvalidParameters: return "invalid-parameters";
        case ErrorCode::SchemaViolation: return "schema-violation";
        case ErrorCode::IoFailure: return "io-failure";
    }
    return "unknown";
}

/// Every failure raised by the library carries one of the codes above; the
/// message is prefixed with the code name so it survives being printed alone.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace vnlw
