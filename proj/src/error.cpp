#include "hrta/error.hpp"

namespace hrta {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::EmptyTaskSet: return "EmptyTaskSet";
    case ErrorCode::NonPositiveParameter: return "NonPositiveParameter";
    case ErrorCode::DeadlineViolation: return "DeadlineViolation";
    case ErrorCode::JitterTooLarge: return "JitterTooLarge";
    case ErrorCode::DuplicatePriority: return "DuplicatePriority";
    case ErrorCode::NonContiguousPriority: return "NonContiguousPriority";
    case ErrorCode::NonHarmonic: return "NonHarmonic";
    case ErrorCode::UtilizationOverload: return "UtilizationOverload";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::NonConvergent: return "NonConvergent";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::JitterPresent: return "JitterPresent";
    case ErrorCode::DeltaOutOfRange: return "DeltaOutOfRange";
    case ErrorCode::CapTooSmall: return "CapTooSmall";
    case ErrorCode::InfeasibleInput: return "InfeasibleInput";
    case ErrorCode::HorizonTooShort: return "HorizonTooShort";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message, std::vector<std::size_t> subjects)
    : std::runtime_error(message), code_(code), subjects_(std::move(subjects)) {}

}  // namespace hrta
