#pragma once

// DSIC characterization on rank-indexed marginals, and an exhaustive
// deviation search used as an independent oracle.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tworound/engine.hpp"

namespace tworound {

constexpr double kMarginalTolerance = 1e-9;
constexpr double kGainTolerance = 1e-9;

enum class DsicCondition { kNone, kCondition1, kCondition2 };

const char* to_string(DsicCondition c);

/// A profitable deviation: the deviator with value `value` bids
/// (first_bid, second_bid) instead of (value, value) against fixed opponents.
struct DeviationWitness {
  int deviator = 0;
  double value = 0.0;
  double first_bid = 0.0;
  double second_bid = 0.0;
  /// Full profile, deviator included at index `deviator`.
  BidProfile profile;
  double truthful_utility = 0.0;
  double deviation_utility = 0.0;

  double gain() const noexcept { return deviation_utility - truthful_utility; }
  bool risky() const noexcept { return first_bid > value; }
};

struct DsicVerdict {
  bool is_dsic = true;
  DsicCondition violated = DsicCondition::kNone;
  std::vector<double> marginals;
  std::optional<DeviationWitness> witness;
};

/// Equal marginals over the top theta-alpha+beta positions, none larger
/// below them. Condition 2 is reported when both fail.
DsicVerdict check_theorem1(const Mechanism& mech);

struct BidGrid {
  double lo = 0.0;
  double hi = 8.0;
  double step = 1.0;

  std::vector<double> points() const;
  /// "lo:hi:step"
  static BidGrid parse(const std::string& text);
};

struct SearchLimits {
  int max_points = 12;
  int max_bidders = 6;
  std::uint64_t max_contexts = 50'000'000;
};

/// Searches every opponent context on the grid, both tie-break placements
/// of the deviator, and every (value, b, s >= b). Returns the first witness
/// in the canonical order. `bidders` = 0 means theta.
std::optional<DeviationWitness> find_deviation(const Mechanism& mech, const BidGrid& grid, int bidders = 0,
                                               const SearchLimits& limits = {});
std::optional<DeviationWitness> find_deviation_serial(const Mechanism& mech, const BidGrid& grid, int bidders = 0,
                                                      const SearchLimits& limits = {});

/// Marginal check, plus the oracle search when a grid is given. The verdict
/// comes from the marginals; the witness from the oracle.
DsicVerdict check_dsic(const Mechanism& mech, const std::optional<BidGrid>& oracle_grid = std::nullopt,
                       int bidders = 0);

}  // namespace tworound
