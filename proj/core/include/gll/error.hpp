#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gll {

enum class ErrorCode {
    ZeroVector,
    NotUnit,
    NotSymmetric,
    DimensionMismatch,
    BadOrder,
    SchemeUnavailable,
    BaseMismatch,
    NotTangent,
    ZeroSection,
    WrongDimension,
    NonFinite,
    Instability,
    TooFewSamples,
    BadParams,
    Config,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; the code identifies the failure class.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

    ErrorCode code() const noexcept { return code_; }
    /// The message without the code prefix.
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::string detail_;
};

/// Raised by the integrator when the state stops being finite or a step is
/// clearly unresolved. Carries the simulation time at which it happened.
class InstabilityError : public Error {
public:
    InstabilityError(double time, const std::string& what)
        : Error(ErrorCode::Instability, what + " at t=" + format_time(time)), time_(time) {}

    double time() const noexcept { return time_; }

private:
    static std::string format_time(double t);
    double time_;
};

}  // namespace gll
