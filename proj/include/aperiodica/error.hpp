#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace aperiodica {

enum class ErrorCode {
    InvalidArgument,
    NotSquarefree,
    PrecisionUnreachable,
    FieldMismatch,
    ZeroElement,
    NotAUnit,
    NotPrimitive,
    DimensionMismatch,
    MergeIllegal,
    NoLegalSeed,
    NonExpanding,
    NotPisot,
    NotInterval,
    NotInvertible,
    SeedNotNested,
    SelfIntersecting,
    ParseError,
    UnknownLetter,
    MissingRule,
};

constexpr std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotSquarefree: return "NotSquarefree";
    case ErrorCode::PrecisionUnreachable: return "PrecisionUnreachable";
    case ErrorCode::FieldMismatch: return "FieldMismatch";
    case ErrorCode::ZeroElement: return "ZeroElement";
    case ErrorCode::NotAUnit: return "NotAUnit";
    case ErrorCode::NotPrimitive: return "NotPrimitive";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::MergeIllegal: return "MergeIllegal";
    case ErrorCode::NoLegalSeed: return "NoLegalSeed";
    case ErrorCode::NonExpanding: return "NonExpanding";
    case ErrorCode::NotPisot: return "NotPisot";
    case ErrorCode::NotInterval: return "NotInterval";
    case ErrorCode::NotInvertible: return "NotInvertible";
    case ErrorCode::SeedNotNested: return "SeedNotNested";
    case ErrorCode::SelfIntersecting: return "SelfIntersecting";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownLetter: return "UnknownLetter";
    case ErrorCode::MissingRule: return "MissingRule";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so that
/// callers (and the CLI exit-code mapping) can dispatch without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace aperiodica
