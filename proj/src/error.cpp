#include "cascade/error.hpp"

namespace cascade {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::MissingPrediction: return "MissingPrediction";
    case ErrorCode::DuplicatePrediction: return "DuplicatePrediction";
    case ErrorCode::UnknownInstance: return "UnknownInstance";
    case ErrorCode::DuplicateInstance: return "DuplicateInstance";
    case ErrorCode::InvalidInstance: return "InvalidInstance";
    case ErrorCode::LabelCountMismatch: return "LabelCountMismatch";
    case ErrorCode::InvalidDistribution: return "InvalidDistribution";
    case ErrorCode::NonFiniteScore: return "NonFiniteScore";
    case ErrorCode::NonMonotoneCosts: return "NonMonotoneCosts";
    case ErrorCode::EmptyCostTable: return "EmptyCostTable";
    case ErrorCode::NonPositiveLength: return "NonPositiveLength";
    case ErrorCode::EmptyBundle: return "EmptyBundle";
    case ErrorCode::ManifestMismatch: return "ManifestMismatch";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::UnknownModel: return "UnknownModel";
    case ErrorCode::ThresholdOutOfRange: return "ThresholdOutOfRange";
    case ErrorCode::RoutingRequiresK3: return "RoutingRequiresK3";
    case ErrorCode::BandViolation: return "BandViolation";
    case ErrorCode::GridTooLarge: return "GridTooLarge";
    case ErrorCode::InfeasibleBudget: return "InfeasibleBudget";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::EmptyCurve: return "EmptyCurve";
    case ErrorCode::CountMismatch: return "CountMismatch";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    }
    return "Unknown";
}

}  // namespace cascade
