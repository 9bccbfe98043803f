#include "tworound/second_round.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "tworound/errors.hpp"

namespace tworound {

AllocationRule::AllocationRule(std::vector<double> x) : x_(std::move(x)), beta_(0) {
  if (x_.empty()) raise(ErrorKind::kSchema, "allocation vector must be non-empty");
  double total = 0.0;
  for (std::size_t j = 0; j < x_.size(); ++j) {
    if (!std::isfinite(x_[j]) || x_[j] < 0.0) raise(ErrorKind::kSchema, "allocation entries must be >= 0");
    if (j > 0 && x_[j] > x_[j - 1]) raise(ErrorKind::kSchema, "allocation must be non-increasing in rank");
    if (x_[j] > 0.0) ++beta_;
    total += x_[j];
  }
  if (total > 1.0 + 1e-12) raise(ErrorKind::kSchema, "allocation sums to more than 1");
  if (beta_ == 0) raise(ErrorKind::kSchema, "allocation needs x_1 > 0");
}

double myerson_payment(std::span<const double> sorted_bids, const AllocationRule& x, int rank) {
  const int alpha = static_cast<int>(sorted_bids.size());
  if (rank < 1 || rank > alpha) {
    raise(ErrorKind::kContractViolation, "rank " + std::to_string(rank) + " outside 1.." + std::to_string(alpha));
  }
  if (!std::is_sorted(sorted_bids.begin(), sorted_bids.end(), std::greater<>())) {
    raise(ErrorKind::kContractViolation, "myerson_payment needs bids sorted non-increasing");
  }
  const auto bid = [&](int j) { return j <= alpha ? sorted_bids[static_cast<std::size_t>(j - 1)] : 0.0; };
  double p = 0.0;
  for (int j = rank; j <= x.beta(); ++j) p += bid(j + 1) * (x.at(j) - x.at(j + 1));
  return p;
}

double second_round_utility(double value, double own_bid, std::span<const double> other_bids,
                            const AllocationRule& x, TieBreak ties) {
  std::vector<double> all(other_bids.begin(), other_bids.end());
  int above = 0;
  for (double b : other_bids) {
    if (b > own_bid || (b == own_bid && ties == TieBreak::kOwnLoses)) ++above;
  }
  all.push_back(own_bid);
  std::sort(all.begin(), all.end(), std::greater<>());
  const int rank = above + 1;
  return value * x.at(rank) - myerson_payment(all, x, rank);
}

double SecondRoundOutcome::revenue() const noexcept {
  return std::accumulate(payment.begin(), payment.end(), 0.0);
}

SecondRoundOutcome run_second_round(std::span<const SecondRoundBid> bids, const AllocationRule& x) {
  std::vector<SecondRoundBid> order(bids.begin(), bids.end());
  std::sort(order.begin(), order.end(), [](const SecondRoundBid& a, const SecondRoundBid& b) {
    if (a.bid != b.bid) return a.bid > b.bid;
    if (a.priority != b.priority) return a.priority < b.priority;
    return a.bidder < b.bidder;
  });
  SecondRoundOutcome out;
  const std::size_t m = order.size();
  out.bidders.resize(m);
  out.bids.resize(m);
  out.allocation.resize(m);
  out.payment.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    out.bidders[j] = order[j].bidder;
    out.bids[j] = order[j].bid;
  }
  for (std::size_t j = 0; j < m; ++j) {
    const int rank = static_cast<int>(j) + 1;
    out.allocation[j] = x.at(rank);
    out.payment[j] = myerson_payment(out.bids, x, rank);
  }
  if (m > 0 && x.at(1) > 0.0) out.winner = out.bidders[0];
  return out;
}

}  // namespace tworound
