#pragma once

#include <stdexcept>
#include <string>

namespace oddo {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A function was evaluated outside its mathematical domain, e.g. the inverse
// gradient of an exponential cost at a non-positive slope.  Usually means a
// bad multiplier prediction reached a local solve; deliberately not clamped.
struct DomainError : Error {
  using Error::Error;
};

// The instance (or a revealed prefix of decisions) admits no feasible
// completion.
struct InfeasibleError : Error {
  using Error::Error;
};

// Invalid configuration or malformed input data.
struct ConfigError : Error {
  using Error::Error;
};

// A solver failed to converge or was applied to a problem class it does not
// support.
struct SolverError : Error {
  using Error::Error;
};

}  // namespace oddo
