#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cascade {

enum class ErrorCode {
    // bad input data
    ParseError,
    IoError,
    MissingPrediction,
    DuplicatePrediction,
    UnknownInstance,
    DuplicateInstance,
    InvalidInstance,
    LabelCountMismatch,
    InvalidDistribution,
    NonFiniteScore,
    NonMonotoneCosts,
    EmptyCostTable,
    NonPositiveLength,
    EmptyBundle,
    ManifestMismatch,
    // bad configuration
    InvalidConfig,
    UnknownModel,
    ThresholdOutOfRange,
    RoutingRequiresK3,
    BandViolation,
    GridTooLarge,
    InfeasibleBudget,
    InvalidSpec,
    EmptyCurve,
    // broken internal invariant
    CountMismatch,
    InvariantViolation,
};

enum class ErrorCategory { Input, Config, Internal };

constexpr ErrorCategory category(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidConfig:
    case ErrorCode::UnknownModel:
    case ErrorCode::ThresholdOutOfRange:
    case ErrorCode::RoutingRequiresK3:
    case ErrorCode::BandViolation:
    case ErrorCode::GridTooLarge:
    case ErrorCode::InfeasibleBudget:
    case ErrorCode::InvalidSpec:
    case ErrorCode::EmptyCurve:
        return ErrorCategory::Config;
    case ErrorCode::CountMismatch:
    case ErrorCode::InvariantViolation:
        return ErrorCategory::Internal;
    default:
        return ErrorCategory::Input;
    }
}

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace cascade
