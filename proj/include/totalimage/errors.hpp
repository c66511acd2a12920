#pragma once

#include <stdexcept>
#include <string>

namespace totalimage {

// Ring mismatch, malformed map, bad arity.
struct StructuralError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised by resource guards (pair count, degree, depth, factor size).
struct ComputationLimit : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A random linear section failed verification after all retries.
struct GenericityFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PreconditionError : std::logic_error {
  using std::logic_error::logic_error;
};

// Position-annotated syntax or semantic error from the text front end.
struct ParseError : std::runtime_error {
  int line;
  int column;
  ParseError(int l, int c, const std::string &msg)
      : std::runtime_error(std::to_string(l) + ":" + std::to_string(c) + ": " + msg), line(l),
        column(c) {}
};

// Internal consistency failure (e.g. a parity violation in a built tree).
struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

} // namespace totalimage
