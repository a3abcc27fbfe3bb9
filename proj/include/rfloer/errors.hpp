#pragma once

#include <stdexcept>
#include <string>

namespace rfloer {

enum class ErrorKind {
    ShapeMismatch,
    NotAComplex,
    NotSquare,
    NonPositiveTau,
    BaseTooSmall,
    BaseMismatch,
    OverflowIntoInfinite,
    TrivialRingPower,
    NotAChainMap,
    DegreeOutOfRange,
    EmptyWindow,
    UnstabilizedDegree,
    WindowMismatch,
    ConsecutiveIndexModel,
    UnstabilizedTruncation,
    TruncationTooNarrow,
    UnboundedEnumeration,
    InvalidModel,
    ParseError,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace rfloer
