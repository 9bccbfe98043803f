#pragma once

// Composes the two rounds. Expected quantities are exact: every selection
// outcome is enumerated and weighted by its probability.

#include <optional>
#include <span>
#include <vector>

#include "tworound/rng.hpp"
#include "tworound/second_round.hpp"
#include "tworound/selection.hpp"

namespace tworound {

class Mechanism {
 public:
  Mechanism(SelectionDistribution selection, AllocationRule allocation);

  int theta() const noexcept { return selection_.theta(); }
  int alpha() const noexcept { return selection_.alpha(); }
  int beta() const noexcept { return allocation_.beta(); }
  /// theta - alpha + beta: only first-round positions up to this one can win.
  int competition_depth() const noexcept { return theta() - alpha() + beta(); }

  const SelectionDistribution& selection() const noexcept { return selection_; }
  const AllocationRule& allocation() const noexcept { return allocation_; }

 private:
  SelectionDistribution selection_;
  AllocationRule allocation_;
};

struct BidProfile {
  std::vector<double> first_round;
  std::vector<double> second_round;

  int size() const noexcept { return static_cast<int>(first_round.size()); }
  /// Both rounds equal, as in the monotone-selection equilibrium analysis.
  static BidProfile same_in_both_rounds(std::vector<double> bids);
};

/// Bidder ids by first-round position; ties go to the lower id.
std::vector<int> first_round_order(std::span<const double> first_round);

/// Throws on n < theta, negative bids, or s' < b' for a bidder who can be
/// selected.
void validate_profile(const Mechanism& mech, const BidProfile& bids);

struct SubsetOutcome {
  Subset positions;
  double probability = 0.0;
  /// Selected bidders in second-round rank order, with their allocation
  /// probabilities and expected payments.
  SecondRoundOutcome round;
  /// First-round position of the top second-round bidder.
  int winner_rank = 0;
  /// Total expected payment collected in this outcome.
  double payment = 0.0;
};

struct AuctionResult {
  std::vector<int> first_round_order;
  /// Empty when no values were supplied.
  std::vector<double> utilities;
  std::vector<double> win_probability;
  std::vector<double> expected_payment;
  double revenue = 0.0;
  std::vector<SubsetOutcome> table;
};

AuctionResult evaluate(const Mechanism& mech, const BidProfile& bids, std::span<const double> values = {});

double expected_utility(const Mechanism& mech, std::span<const double> values, const BidProfile& bids, int bidder);
double expected_revenue(const Mechanism& mech, const BidProfile& bids);

/// s_beta >= b_{theta-alpha+beta} for one selection outcome.
bool line_of_competition_holds(const Mechanism& mech, const BidProfile& bids, const SubsetOutcome& outcome);

struct RealizedRun {
  Subset positions;
  SecondRoundOutcome round;
  /// Realized winner; the winner pays p_j / x_j so expected revenue matches.
  std::optional<int> winner;
  double payment = 0.0;
};

/// One sampled run. Throws kInvariant if the line of competition is broken.
RealizedRun simulate_run(const Mechanism& mech, const BidProfile& bids, SplitMix64& rng);

}  // namespace tworound
