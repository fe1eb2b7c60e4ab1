#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ctrlgauge {

enum class ErrorCode {
    DimensionMismatch,
    NonFinite,
    NonPositiveBound,
    MissingTarget,
    NotImplemented,
    ZeroDirection,
    BadAxes,
    NotConvex,
    UnstableGrowth,
    SingularA,
    HorizonTooShort,
    BadRange,
    Infeasible,
    IterationLimit,
    InternalError,
    NotReachable,
    NotMember,
    PreconditionNotMet,
    TooManyGenerators,
    DegenerateZonotope,
    InvalidArgument,
    SchemaViolation,
};

std::string_view to_string(ErrorCode code);

// All library failures are reported through this exception; `code()` lets
// callers (the CLI in particular) map failures onto stable exit statuses.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace ctrlgauge
