#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tprice {

enum class ErrorCode {
    InvalidArgument,
    InvalidCurve,
    DuplicateAbscissa,
    NoOptimum,
    CExceedsFeasible,
    NegativeEffectiveContribution,
    VariableCostTooHigh,
    MalformedScenario,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::InvalidCurve: return "InvalidCurve";
        case ErrorCode::DuplicateAbscissa: return "DuplicateAbscissa";
        case ErrorCode::NoOptimum: return "NoOptimum";
        case ErrorCode::CExceedsFeasible: return "CExceedsFeasible";
        case ErrorCode::NegativeEffectiveContribution: return "NegativeEffectiveContribution";
        case ErrorCode::VariableCostTooHigh: return "VariableCostTooHigh";
        case ErrorCode::MalformedScenario: return "MalformedScenario";
    }
    return "Unknown";
}

/// Domain error raised by every solver entry point. The code is stable and
/// is what the CLI prints as its `error[<code>]` prefix.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace tprice
