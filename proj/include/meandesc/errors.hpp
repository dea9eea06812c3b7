#pragma once

#include <stdexcept>
#include <string>

namespace meandesc {

// Base class for every failure mode surfaced by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DistinctnessViolation : Error { using Error::Error; };
struct ParamOutOfRange : Error { using Error::Error; };
struct BracketFailure : Error { using Error::Error; };
struct OrderViolation : Error { using Error::Error; };
struct DomainViolation : Error { using Error::Error; };
struct ShapeMismatch : Error { using Error::Error; };
struct IndexOutOfRange : Error { using Error::Error; };
struct ToleranceTooSmall : Error { using Error::Error; };
struct NonConvergence : Error { using Error::Error; };
struct GridTooCoarse : Error { using Error::Error; };
struct MissingDerivative : Error { using Error::Error; };
struct ClassificationError : Error { using Error::Error; };
struct PreconditionViolation : Error { using Error::Error; };

struct ParseError : Error {
    int line;
    int column;
    ParseError(const std::string& what, int line_, int column_)
        : Error("parse error at " + std::to_string(line_) + ":" + std::to_string(column_) + ": " + what),
          line(line_),
          column(column_) {}
};

}  // namespace meandesc
