#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vu {

// Machine-readable reason codes. The string forms are part of the HTTP API
// (see docs/api.md) and must stay stable.
enum class ErrorCode {
    BadRequest,
    SchemaViolation,
    InvalidDefinition,
    UnknownStudy,
    UnknownParticipant,
    UnknownSequence,
    UnknownArea,
    DuplicateParticipant,
    DuplicateResponse,
    DuplicateArea,
    DuplicateStudy,
    WrongPhase,
    IncompleteFamiliarity,
    GateUnmet,
    InsufficientData,
    InvalidGrid,
    InvalidZoneLimits,
    CorruptLog,
    IoError,
    Unsatisfiable,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace vu
