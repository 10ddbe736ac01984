#pragma once
// Error types shared across the engine. Every error carries a stable kind
// so callers (the CLI in particular) can map failures to exit codes.

#include <stdexcept>
#include <string>

namespace lmlp {

enum class ErrorKind {
    UnparsableText,
    UnknownRelation,
    ChainBroken,
    DimensionMismatch,
    ZeroVector,
    EmptyText,
    EmptySlice,
    RuleExhausted,
    Transport,
    Protocol,
    ReplayMiss,
    NoExampleForRelation,
    InfeasibleSize,
    CompositionUndefined,
    VocabTooSmall,
    UnprovableTestQuery,
    InvalidArgument,
    Io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

    // Failures raised by planner/translator backends after retries.
    bool is_backend_failure() const noexcept {
        return kind_ == ErrorKind::Transport || kind_ == ErrorKind::Protocol ||
               kind_ == ErrorKind::ReplayMiss;
    }

private:
    ErrorKind kind_;
};

}  // namespace lmlp
