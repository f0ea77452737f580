#pragma once

#include <stdexcept>
#include <string>

namespace ising {

/// Machine-readable failure categories surfaced by the engines and the CLI.
enum class ErrorCode {
    NonPlanar,
    NonZeroField,
    DisconnectedConditionSet,
    NoPerfectMatching,
    NumericalBreakdown,
    NotBiconnected,
    NotK33Free,
    NotK5Free,
    InvalidDecomposition,
    InfeasibleFamily,
    TooLarge,
    InvalidInput,
    Internal,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

} // namespace ising
