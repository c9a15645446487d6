#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hrta {

enum class ErrorCode {
    EmptyTaskSet,
    NonPositiveParameter,
    DeadlineViolation,
    JitterTooLarge,
    DuplicatePriority,
    NonContiguousPriority,
    NonHarmonic,
    UtilizationOverload,
    IndexOutOfRange,
    NonConvergent,
    DomainError,
    JitterPresent,
    DeltaOutOfRange,
    CapTooSmall,
    InfeasibleInput,
    HorizonTooShort,
    InvalidConfig,
    ParseError,
};

std::string_view to_string(ErrorCode code);

/// Base exception of the library. `subjects` names the offending task or
/// stage indices when the error concerns specific elements.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, std::vector<std::size_t> subjects = {});

    ErrorCode code() const noexcept { return code_; }
    const std::vector<std::size_t>& subjects() const noexcept { return subjects_; }

private:
    ErrorCode code_;
    std::vector<std::size_t> subjects_;
};

}  // namespace hrta
