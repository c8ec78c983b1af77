#pragma once

#include <stdexcept>
#include <string>

namespace fourblock {

enum class ErrorCode {
    ParseError,
    DimensionMismatch,
    NonIntegerEntry,
    Singular,
    ZeroVector,
    ParamsTooLarge,
    FaceBudgetExceeded,
    NodeBudgetExceeded,
    BoundTooSmall,
    NotIntegral,
    NotInCone,
    DomainViolation,
    SearchBudgetExceeded,
    BoxTooLarge,
    ReconstructionMismatch,
    EmptyCone,
    Usage,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace fourblock
