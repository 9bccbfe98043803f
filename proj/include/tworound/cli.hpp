#pragma once

#include <cstdint>
#include <iosfwd>

namespace tworound {

/// Exit codes.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitNegative = 3;

constexpr std::uint64_t kDefaultSeed = 42;
/// Overrides kDefaultSeed when set.
constexpr const char* kSeedEnvVar = "TWOROUND_SEED";

/// Entry point behind the `tworound` binary. Results go to `out`; failures
/// go to `err` as one JSON line {"error": kind, "message": text}.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tworound
