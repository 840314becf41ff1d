#pragma once

#include <stdexcept>
#include <string>

namespace wm {

// Violated precondition or internal invariant. These indicate caller bugs
// (dimension mismatch, non-monotone clock, displacing from a non-full store),
// not recoverable runtime conditions.
struct ContractViolation : std::logic_error {
    using std::logic_error::logic_error;
};

// Invalid engine configuration (weights not summing to 1, bad capacities...).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Scenario or trace file rejected at parse time.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Provider call failures. Every provider call either returns a valid result
// or throws exactly one of these.
enum class ProviderErrorKind { Timeout, MalformedResponse, Unavailable };

struct ProviderError {
    ProviderErrorKind kind = ProviderErrorKind::Unavailable;
    std::string detail;
};

struct ProviderFailure : std::runtime_error {
    explicit ProviderFailure(ProviderError err)
        : std::runtime_error(err.detail), error(std::move(err)) {}
    ProviderError error;
};

inline const char* to_string(ProviderErrorKind kind) {
    switch (kind) {
        case ProviderErrorKind::Timeout: return "timeout";
        case ProviderErrorKind::MalformedResponse: return "malformed_response";
        case ProviderErrorKind::Unavailable: return "unavailable";
    }
    return "unavailable";
}

}  // namespace wm
