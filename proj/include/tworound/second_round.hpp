#pragma once

// The second round: a rank-based allocation vector with discrete Myerson
// payments over the alpha advanced bidders.

#include <optional>
#include <span>
#include <vector>

namespace tworound {

class AllocationRule {
 public:
  /// x_1 >= x_2 >= ... >= x_alpha >= 0, sum <= 1, x_1 > 0.
  explicit AllocationRule(std::vector<double> x);

  std::span<const double> x() const noexcept { return x_; }
  int size() const noexcept { return static_cast<int>(x_.size()); }
  /// Number of ranks with positive allocation probability.
  int beta() const noexcept { return beta_; }
  /// 1-based; ranks beyond alpha get 0.
  double at(int rank) const noexcept {
    return (rank >= 1 && rank <= size()) ? x_[static_cast<std::size_t>(rank - 1)] : 0.0;
  }

 private:
  std::vector<double> x_;
  int beta_;
};

/// p_rank = sum_{j=rank}^{beta} s_{j+1} (x_j - x_{j+1}), with x_{beta+1} = 0 and
/// s_{alpha+1} = 0. `sorted_bids` must be non-increasing.
double myerson_payment(std::span<const double> sorted_bids, const AllocationRule& x, int rank);

/// Which side of an exact tie the bidder under evaluation lands on.
enum class TieBreak { kOwnLoses, kOwnWins };

/// v * x_j - p_j, where j is the rank of `own_bid` among all alpha bids.
double second_round_utility(double value, double own_bid, std::span<const double> other_bids,
                            const AllocationRule& x, TieBreak ties = TieBreak::kOwnLoses);

struct SecondRoundBid {
  int bidder;
  double bid;
  /// Lower wins ties (the first-round position).
  int priority;
};

struct SecondRoundOutcome {
  /// Bidders in second-round rank order.
  std::vector<int> bidders;
  std::vector<double> bids;
  std::vector<double> allocation;
  std::vector<double> payment;
  std::optional<int> winner;

  double revenue() const noexcept;
};

SecondRoundOutcome run_second_round(std::span<const SecondRoundBid> bids, const AllocationRule& x);

}  // namespace tworound
