#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pmt {

enum class ErrorCode {
    TooShort,
    NonFinite,
    DegenerateVariance,
    LagOutOfRange,
    LagTooLarge,
    SingularToeplitz,
    NonPositiveVariance,
    NotPositiveDefinite,
    DegenerateSample,
    InvalidOrder,
    NonPositiveDf,
    NonStationary,
    NonInvertible,
    InvalidSpec,
    SingularDesign,
    NonConvergence,
    EmptySample,
    InvalidConfig,
    MalformedInput,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-checkable error code.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace pmt
