#include "portmanteau/error.hpp"

namespace pmt {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::TooShort: return "TooShort";
        case ErrorCode::NonFinite: return "NonFinite";
        case ErrorCode::DegenerateVariance: return "DegenerateVariance";
        case ErrorCode::LagOutOfRange: return "LagOutOfRange";
        case ErrorCode::LagTooLarge: return "LagTooLarge";
        case ErrorCode::SingularToeplitz: return "SingularToeplitz";
        case ErrorCode::NonPositiveVariance: return "NonPositiveVariance";
        case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
        case ErrorCode::DegenerateSample: return "DegenerateSample";
        case ErrorCode::InvalidOrder: return "InvalidOrder";
        case ErrorCode::NonPositiveDf: return "NonPositiveDf";
        case ErrorCode::NonStationary: return "NonStationary";
        case ErrorCode::NonInvertible: return "NonInvertible";
        case ErrorCode::InvalidSpec: return "InvalidSpec";
        case ErrorCode::SingularDesign: return "SingularDesign";
        case ErrorCode::NonConvergence: return "NonConvergence";
        case ErrorCode::EmptySample: return "EmptySample";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::MalformedInput: return "MalformedInput";
    }
    return "Unknown";
}

}  // namespace pmt
