#pragma once

#include <stdexcept>
#include <string>

namespace tangency {

enum class ErrorCode {
    Domain,
    Numeric,
    NoVerticalTangency,
    WindowExceeded,
    SmallExpandingViolation,
    WrongQuadrant,
    ChartExit,
    NotFound,
    Inconclusive,
    Config,
    Io,
};

const char* to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so the
/// C boundary can translate it without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

}  // namespace tangency
