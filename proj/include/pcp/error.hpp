#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pcp {

enum class ErrorKind {
    NotSquare,
    NotHermitian,
    NotFinite,
    DimensionMismatch,
    WrongDimension,
    ConditionsViolated,
    NotCLDUI,
    ComparisonNotPsd,
    UnsupportedDimension,
    LengthMismatch,
    NotSorted,
    NegativeEigenvalue,
    InvalidOrdering,
    ConstructionError,
    Parse,
    Io,
};

std::string_view to_string(ErrorKind kind);

/// Exception carrying a machine-checkable kind alongside the message.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::NotSquare: return "NotSquare";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotFinite: return "NotFinite";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::WrongDimension: return "WrongDimension";
    case ErrorKind::ConditionsViolated: return "ConditionsViolated";
    case ErrorKind::NotCLDUI: return "NotCLDUI";
    case ErrorKind::ComparisonNotPsd: return "ComparisonNotPsd";
    case ErrorKind::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::NotSorted: return "NotSorted";
    case ErrorKind::NegativeEigenvalue: return "NegativeEigenvalue";
    case ErrorKind::InvalidOrdering: return "InvalidOrdering";
    case ErrorKind::ConstructionError: return "ConstructionError";
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

} // namespace pcp
