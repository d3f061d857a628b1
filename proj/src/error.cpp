#include "bhlab/error.hpp"

namespace bhlab {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::InvalidGrid: return "InvalidGrid";
        case ErrorCode::OrderOutOfRange: return "OrderOutOfRange";
        case ErrorCode::NonFiniteInput: return "NonFiniteInput";
        case ErrorCode::PointOutsideGrid: return "PointOutsideGrid";
        case ErrorCode::SupportTooWide: return "SupportTooWide";
        case ErrorCode::RadiusTooSmall: return "RadiusTooSmall";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::NonPositiveNu: return "NonPositiveNu";
        case ErrorCode::XTooSmall: return "XTooSmall";
        case ErrorCode::GridTooSmall: return "GridTooSmall";
        case ErrorCode::DegenerateModulation: return "DegenerateModulation";
        case ErrorCode::PositiveSlope: return "PositiveSlope";
        case ErrorCode::SmallFifthDerivative: return "SmallFifthDerivative";
        case ErrorCode::TauDotGeOne: return "TauDotGeOne";
        case ErrorCode::LeftDomain: return "LeftDomain";
        case ErrorCode::FramesMisaligned: return "FramesMisaligned";
        case ErrorCode::CflViolation: return "CflViolation";
        case ErrorCode::NonFiniteState: return "NonFiniteState";
        case ErrorCode::TargetBeyondBlowup: return "TargetBeyondBlowup";
        case ErrorCode::JacobianDisagreement: return "JacobianDisagreement";
        case ErrorCode::SingularJacobian: return "SingularJacobian";
        case ErrorCode::MaxItersExceeded: return "MaxItersExceeded";
        case ErrorCode::TrustRegionExceeded: return "TrustRegionExceeded";
        case ErrorCode::InsufficientDecade: return "InsufficientDecade";
        case ErrorCode::WindowTooNarrow: return "WindowTooNarrow";
        case ErrorCode::NonPositiveValues: return "NonPositiveValues";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace bhlab
