#pragma once

#include <stdexcept>
#include <string>

namespace aslab {

inline constexpr const char* kCodeVersion = "0.1.0";

/// A counting or round-trip invariant failed. CLI exit code 1.
struct InvariantViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parameters outside the feasible desk-scale envelope. CLI exit code 2.
struct InfeasibleError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Cache file corruption or config mismatch. CLI exit code 3.
struct CacheError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace aslab
