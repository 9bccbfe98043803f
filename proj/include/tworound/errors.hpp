#pragma once

#include <stdexcept>
#include <string>

namespace tworound {

enum class ErrorKind {
  kInvalidArgument,
  kMode,
  kContractViolation,
  kConfiguration,
  kDomain,
  kDegenerateRatio,
  kResourceLimit,
  kConstructionFailure,
  kSchema,
  kInvariant,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the library. `kind()` is stable and is what the
/// CLI prints in its one-line error record.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void raise(ErrorKind kind, const std::string& message);

}  // namespace tworound
