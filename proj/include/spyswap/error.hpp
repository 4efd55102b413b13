#pragma once

#include <stdexcept>
#include <string>

namespace spyswap {

// Every error carries a short machine-readable code; the CLI prints it as-is.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

struct InvalidInput : Error {
  explicit InvalidInput(const std::string& m) : Error("invalid_input", m) {}
};

struct DimensionError : Error {
  explicit DimensionError(const std::string& m) : Error("dimension_error", m) {}
};

struct ParseError : Error {
  explicit ParseError(const std::string& m) : Error("parse_error", m) {}
};

struct PreconditionError : Error {
  explicit PreconditionError(const std::string& m) : Error("precondition_error", m) {}
};

// The requested work exceeds what this implementation can do at desk scale.
struct CapabilityError : Error {
  explicit CapabilityError(const std::string& m) : Error("capability_error", m) {}
};

struct CoverageError : Error {
  explicit CoverageError(const std::string& m) : Error("coverage_failure", m) {}
};

struct ParameterError : Error {
  explicit ParameterError(const std::string& m) : Error("parameter_error", m) {}
};

// Something that must exist was not found: always a bug.
struct InvariantViolation : Error {
  explicit InvariantViolation(const std::string& m) : Error("invariant_violation", m) {}
};

}  // namespace spyswap
