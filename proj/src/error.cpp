#include "hlf/error.hpp"

namespace hlf {

const char *error_name(ErrorCode c)
{
    switch (c) {
    case ErrorCode::DivisionByZero: return "DIVISION_BY_ZERO";
    case ErrorCode::FieldMismatch: return "FIELD_MISMATCH";
    case ErrorCode::SyntaxError: return "SYNTAX_ERROR";
    case ErrorCode::UnknownParameter: return "UNKNOWN_PARAMETER";
    case ErrorCode::PrecisionExhausted: return "PRECISION_EXHAUSTED";
    case ErrorCode::NotIntegral: return "NOT_INTEGRAL";
    case ErrorCode::ZeroElement: return "ZERO_ELEMENT";
    case ErrorCode::UnsupportedField: return "UNSUPPORTED_FIELD";
    case ErrorCode::UnsupportedScalar: return "UNSUPPORTED_SCALAR";
    case ErrorCode::UnsupportedFamily: return "UNSUPPORTED_FAMILY";
    case ErrorCode::NoProperLevel: return "NO_PROPER_LEVEL";
    case ErrorCode::ArityMismatch: return "ARITY_MISMATCH";
    case ErrorCode::TargetViolation: return "TARGET_VIOLATION";
    case ErrorCode::NotFree: return "NOT_FREE";
    case ErrorCode::InvalidInput: return "INVALID_INPUT";
    }
    return "UNKNOWN_ERROR";
}

Error::Error(ErrorCode code, const std::string &msg)
    : std::runtime_error(std::string(error_name(code)) + ": " + msg), code_(code)
{
}

SyntaxError::SyntaxError(std::size_t pos, const std::string &msg)
    : Error(ErrorCode::SyntaxError, msg + " at position " + std::to_string(pos)), pos_(pos)
{
}

void fail(ErrorCode code, const std::string &msg) { throw Error(code, msg); }

} // namespace hlf
