#include "gll/error.hpp"

#include <cstdio>

namespace gll {

std::string InstabilityError::format_time(double t) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", t);
    return buf;
}

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::ZeroVector: return "ZeroVector";
        case ErrorCode::NotUnit: return "NotUnit";
        case ErrorCode::NotSymmetric: return "NotSymmetric";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::BadOrder: return "BadOrder";
        case ErrorCode::SchemeUnavailable: return "SchemeUnavailable";
        case ErrorCode::BaseMismatch: return "BaseMismatch";
        case ErrorCode::NotTangent: return "NotTangent";
        case ErrorCode::ZeroSection: return "ZeroSection";
        case ErrorCode::WrongDimension: return "WrongDimension";
        case ErrorCode::NonFinite: return "NonFinite";
        case ErrorCode::Instability: return "Instability";
        case ErrorCode::TooFewSamples: return "TooFewSamples";
        case ErrorCode::BadParams: return "BadParams";
        case ErrorCode::Config: return "Config";
    }
    return "Unknown";
}

}  // namespace gll
