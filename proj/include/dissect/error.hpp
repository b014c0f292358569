#pragma once

#include <stdexcept>
#include <string>

namespace dissect {

enum class ErrorKind {
  CrossingChords,
  DuplicateChord,
  OutOfRange,
  NotOuterEdge,
  RootEdgeGlue,
  InvalidPattern,
  OracleLimitExceeded,
  CapExceeded,
  MalformedSystem,
  NonConvergence,
  NewtonDiverged,
  NoSingularityInRange,
  DegenerateKernel,
  DerivativeUnstable,
  SubcriticalityViolated,
  MismatchAt,
  InvalidInput,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace dissect
