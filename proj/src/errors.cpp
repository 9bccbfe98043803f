#include "tworound/errors.hpp"

namespace tworound {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid-arguments";
    case ErrorKind::kMode: return "mode";
    case ErrorKind::kContractViolation: return "contract-violation";
    case ErrorKind::kConfiguration: return "configuration";
    case ErrorKind::kDomain: return "domain";
    case ErrorKind::kDegenerateRatio: return "degenerate-ratio";
    case ErrorKind::kResourceLimit: return "resource-limit";
    case ErrorKind::kConstructionFailure: return "construction-failure";
    case ErrorKind::kSchema: return "schema";
    case ErrorKind::kInvariant: return "invariant";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(message), kind_(kind) {}

void raise(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace tworound
