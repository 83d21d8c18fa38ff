#pragma once

#include <stdexcept>
#include <string>

namespace linkcomb {

enum class ErrorCode {
    NonPlanarEmbedding,
    NotACycle,
    CycleBoundsOuterFace,
    UnknownVertex,
    IndexOutOfRange,
    TooSmall,
    BadParams,
    BadSpec,
    StreamsNotDisjoint,
    DegreeViolation,
    TooLarge,
    MalformedInput,
    SearchBudgetExceeded,
    Infeasible,
    PipelineInfeasible,
    TooManyBridges,
    NoValidAssignment,
    ParseError,
};

const char* error_code_name(ErrorCode c);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string msg)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + msg),
          code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

/// Pipeline failures carry the stage that could not be completed.
class PipelineError : public Error {
public:
    PipelineError(std::string stage, std::string msg)
        : Error(ErrorCode::PipelineInfeasible, stage + ": " + msg),
          stage_(std::move(stage)) {}

    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

} // namespace linkcomb
