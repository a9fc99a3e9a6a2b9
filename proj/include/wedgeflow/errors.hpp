#pragma once

#include <stdexcept>
#include <string>

namespace wedgeflow {

/// Base class of every failure this library reports. `name()` is a stable
/// machine-readable tag (used by the CLI for exit summaries); `what()` adds
/// human-readable context.
class FlowError : public std::runtime_error {
public:
    FlowError(std::string name, const std::string& detail)
        : std::runtime_error(name + ": " + detail), name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

/// Density or enthalpy head left the physical domain (cavitation).
struct VacuumError : FlowError {
    explicit VacuumError(const std::string& detail) : FlowError("VacuumError", detail) {}
};

/// An operation that requires supersonic flow got a subsonic state.
struct NotSupersonicError : FlowError {
    explicit NotSupersonicError(const std::string& detail) : FlowError("NotSupersonic", detail) {}
};

/// Shock angle below the Mach angle: no compressive solution exists.
struct BetaOutOfRangeError : FlowError {
    explicit BetaOutOfRangeError(const std::string& detail) : FlowError("BetaOutOfRange", detail) {}
};

/// u1 <= c: the x1 direction is no longer time-like and marching is invalid.
struct AxiallySubsonicError : FlowError {
    explicit AxiallySubsonicError(const std::string& detail) : FlowError("AxiallySubsonic", detail) {}
};

/// Requested turning exceeds the detachment angle of the local state.
struct DetachedError : FlowError {
    explicit DetachedError(const std::string& detail) : FlowError("Detached", detail) {}
};

/// A scalar or vector solve failed to converge from its documented start.
struct NoRootError : FlowError {
    explicit NoRootError(const std::string& detail) : FlowError("NoRoot", detail) {}
};

/// Wave curves of a Riemann problem do not intersect (states too far apart).
struct NoIntersectionError : FlowError {
    explicit NoIntersectionError(const std::string& detail) : FlowError("NoIntersection", detail) {}
};

/// Mesh ratio violates the stability bound.
struct CflViolationError : FlowError {
    explicit CflViolationError(const std::string& detail) : FlowError("CflViolation", detail) {}
};

/// Too few samples to form a tail estimate.
struct InsufficientDataError : FlowError {
    explicit InsufficientDataError(const std::string& detail) : FlowError("InsufficientData", detail) {}
};

/// Query point lies outside the flow domain.
struct OutOfDomainError : FlowError {
    explicit OutOfDomainError(const std::string& detail) : FlowError("OutOfDomain", detail) {}
};

} // namespace wedgeflow
