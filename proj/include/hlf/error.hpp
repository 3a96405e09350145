#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hlf {

enum class ErrorCode {
    DivisionByZero,
    FieldMismatch,
    SyntaxError,
    UnknownParameter,
    PrecisionExhausted,
    NotIntegral,
    ZeroElement,
    UnsupportedField,
    UnsupportedScalar,
    UnsupportedFamily,
    NoProperLevel,
    ArityMismatch,
    TargetViolation,
    NotFree,
    InvalidInput,
};

const char *error_name(ErrorCode c);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string &msg);
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

// Syntax errors carry the byte offset into the parsed text.
class SyntaxError : public Error {
public:
    SyntaxError(std::size_t pos, const std::string &msg);
    std::size_t position() const { return pos_; }

private:
    std::size_t pos_;
};

[[noreturn]] void fail(ErrorCode code, const std::string &msg);

} // namespace hlf
