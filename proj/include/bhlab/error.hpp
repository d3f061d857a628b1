#pragma once

#include <stdexcept>
#include <string>

namespace bhlab {

// Every failure the library reports carries one of these codes so callers
// (tests, the CLI exit-code mapping) can branch without string matching.
enum class ErrorCode {
    InvalidArgument,
    InvalidGrid,
    OrderOutOfRange,
    NonFiniteInput,
    PointOutsideGrid,
    SupportTooWide,
    RadiusTooSmall,
    NoConvergence,
    NonPositiveNu,
    XTooSmall,
    GridTooSmall,
    DegenerateModulation,
    PositiveSlope,
    SmallFifthDerivative,
    TauDotGeOne,
    LeftDomain,
    FramesMisaligned,
    CflViolation,
    NonFiniteState,
    TargetBeyondBlowup,
    JacobianDisagreement,
    SingularJacobian,
    MaxItersExceeded,
    TrustRegionExceeded,
    InsufficientDecade,
    WindowTooNarrow,
    NonPositiveValues,
    ConfigError,
    IoError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace bhlab
