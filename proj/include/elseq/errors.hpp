#pragma once

#include <stdexcept>
#include <string>

namespace elseq {

// Exit codes used by the CLI: 0 success, 1 parameter error,
// 2 invariant violation, 3 resource cap.
enum class ExitCode : int {
  ok = 0,
  parameter_error = 1,
  invariant_violation = 2,
  resource_cap = 3,
};

class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

// Input is syntactically fine but outside the regime a formula is valid in.
class UnsupportedRegimeError : public ParameterError {
 public:
  explicit UnsupportedRegimeError(const std::string& what) : ParameterError(what) {}
};

// A mathematically guaranteed property failed to hold; never expected at runtime.
class InvariantViolationError : public std::logic_error {
 public:
  explicit InvariantViolationError(const std::string& what) : std::logic_error(what) {}
};

class ResourceCapError : public std::runtime_error {
 public:
  explicit ResourceCapError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace elseq
