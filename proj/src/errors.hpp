#pragma once

#include <stdexcept>
#include <string>

namespace sphk {

/// Failure categories shared by every module and mirrored by the C status codes.
enum class ErrorCode {
    Domain = 1,
    Pole,
    NonConvergence,
    Branch,
    Parse,
    DimensionMismatch,
    UnknownName,
    RuleTooCoarse,
    NotADesign,
    PositivityViolation,
    Precondition,
    Io
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message)
{
    throw Error(code, message);
}

}  // namespace sphk
