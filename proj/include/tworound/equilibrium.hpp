#pragma once

// Nash equilibria in the monotone-selection regime, where a bidder bids the
// same amount in both rounds and the strategic choice is its first-round
// position.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tworound/engine.hpp"
#include "tworound/selection.hpp"

namespace tworound {

constexpr double kStrictTolerance = 1e-9;
constexpr double kDefaultBidStep = 0.01;

/// order[p] is the bidder (0-based) in first-round position p+1; bids are
/// strictly decreasing in position.
class RankProfile {
 public:
  /// Bids indexed by bidder; the order follows from them.
  static RankProfile from_bids(std::vector<double> bids);

  const std::vector<int>& order() const noexcept { return order_; }
  const std::vector<double>& bids() const noexcept { return bids_; }
  int size() const noexcept { return static_cast<int>(bids_.size()); }
  /// 1-based position of a bidder.
  int position_of(int bidder) const;

 private:
  std::vector<int> order_;
  std::vector<double> bids_;
};

/// Bid that lands a bidder in position t (1-based) among `others` sorted
/// non-increasing: just above the incumbent, by min(step, half the gap).
double placement_bid(std::span<const double> others_sorted, int t, double step = kDefaultBidStep);

struct BidderDeviations {
  int bidder = 0;
  int position = 0;
  double current_utility = 0.0;
  /// utility_at[t-1]: utility after moving to position t, t = 1..depth.
  std::vector<double> utility_at;
  int best_position = 0;
  bool gains = false;
};

struct NeCheck {
  bool is_ne = true;
  std::vector<BidderDeviations> bidders;
};

NeCheck is_nash_equilibrium(const Mechanism& mech, std::span<const double> values, const RankProfile& rank,
                            double step = kDefaultBidStep);

// Mode with alpha = theta - 1 and a second-price second round.

enum class N11Rank { kTruthful, kRisky };

const char* to_string(N11Rank r);

struct N11Classification {
  int theta = 0;
  /// (v1 - v2) / (v2 - v3)
  double ratio = 0.0;
  /// (Y_{theta-1} - Y_theta) / sum_{i <= theta-2} Y_i
  double threshold = 0.0;
  bool truthful_ne = false;
  bool risky_ne = false;
  bool indeterminate = false;
  /// Smallest grid bid for the overbidding bidder that sustains the risky order.
  std::optional<double> risky_bid;
};

/// Throws kDegenerateRatio when v2 == v3 and kDomain when Y is not ordered
/// or out of bounds.
N11Classification n11_classify(double v1, double v2, double v3, const ExclusionY& y, double step = kDefaultBidStep);

double n11_revenue(N11Rank rank, double v1, double v2, double v3, const ExclusionY& y);

/// Upper bound on risky revenue under the risky-order condition.
double n11_supremum_bound(double v1, double v2, const ExclusionY& y);

/// (v1 - v2) / (v1 - v3): risky revenue beats v2 iff Y_{theta-1} + Y_theta is
/// below this.
double n11_lemma3_threshold(double v1, double v2, double v3);

struct N11Construction {
  ExclusionY y;
  /// 1 when Y_{theta-1} + Y_theta already exceeds the threshold, else 2.
  int branch = 0;
  double truthful_revenue = 0.0;
  double risky_revenue = 0.0;
};

/// From a truthful-feasible Y, builds a risky-feasible Y' with strictly more
/// revenue. Throws kConstructionFailure with the bounds that ruled it out.
N11Construction n11_construct_better_Y(const ExclusionY& y, double v1, double v2, double v3);

/// Mechanism with selection from Y, alpha = theta - 1 and x = (1, 0, ...).
Mechanism n11_mechanism(const ExclusionY& y);
/// v1, v2, v3 followed by theta - 3 smaller values.
std::vector<double> n11_values(double v1, double v2, double v3, int theta);
/// Truthful: everyone bids their value. Risky: bidder 2 bids `risky_bid`.
RankProfile n11_profile(N11Rank rank, std::span<const double> values, double risky_bid = 0.0);

}  // namespace tworound
