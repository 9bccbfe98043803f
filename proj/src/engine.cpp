#include "tworound/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "tworound/errors.hpp"

namespace tworound {

Mechanism::Mechanism(SelectionDistribution selection, AllocationRule allocation)
    : selection_(std::move(selection)), allocation_(std::move(allocation)) {
  if (allocation_.size() != selection_.alpha()) {
    raise(ErrorKind::kSchema, "allocation length " + std::to_string(allocation_.size()) +
                                  " must equal alpha " + std::to_string(selection_.alpha()));
  }
}

BidProfile BidProfile::same_in_both_rounds(std::vector<double> bids) {
  BidProfile p;
  p.second_round = bids;
  p.first_round = std::move(bids);
  return p;
}

std::vector<int> first_round_order(std::span<const double> first_round) {
  std::vector<int> order(first_round.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return first_round[static_cast<std::size_t>(a)] > first_round[static_cast<std::size_t>(b)];
  });
  return order;
}

void validate_profile(const Mechanism& mech, const BidProfile& bids) {
  const int n = bids.size();
  if (static_cast<int>(bids.second_round.size()) != n) {
    raise(ErrorKind::kSchema, "first and second round bid vectors differ in length");
  }
  if (n < mech.theta()) {
    raise(ErrorKind::kConfiguration, "need at least theta=" + std::to_string(mech.theta()) +
                                         " bidders, got " + std::to_string(n));
  }
  for (int i = 0; i < n; ++i) {
    const double b = bids.first_round[static_cast<std::size_t>(i)];
    const double s = bids.second_round[static_cast<std::size_t>(i)];
    if (!std::isfinite(b) || !std::isfinite(s) || b < 0.0 || s < 0.0) {
      raise(ErrorKind::kSchema, "bids must be finite and nonnegative");
    }
  }
  const auto order = first_round_order(bids.first_round);
  const auto y = marginal_probabilities(mech.selection());
  for (int pos = 1; pos <= mech.theta(); ++pos) {
    if (y[static_cast<std::size_t>(pos - 1)] <= 0.0) continue;
    const auto i = static_cast<std::size_t>(order[static_cast<std::size_t>(pos - 1)]);
    if (bids.second_round[i] < bids.first_round[i]) {
      raise(ErrorKind::kInvariant, "bidder " + std::to_string(i) + " lowers its bid in the second round");
    }
  }
}

namespace {

SubsetOutcome outcome_for(const Mechanism& mech, const BidProfile& bids, const std::vector<int>& order,
                          const Subset& positions, double probability) {
  std::vector<SecondRoundBid> entries;
  entries.reserve(positions.size());
  for (int pos : positions) {
    const int bidder = order[static_cast<std::size_t>(pos - 1)];
    entries.push_back({bidder, bids.second_round[static_cast<std::size_t>(bidder)], pos});
  }
  SubsetOutcome out;
  out.positions = positions;
  out.probability = probability;
  out.round = run_second_round(entries, mech.allocation());
  out.payment = out.round.revenue();
  const int top = out.round.bidders.front();
  for (const auto& e : entries) {
    if (e.bidder == top) out.winner_rank = e.priority;
  }
  return out;
}

}  // namespace

AuctionResult evaluate(const Mechanism& mech, const BidProfile& bids, std::span<const double> values) {
  validate_profile(mech, bids);
  const int n = bids.size();
  if (!values.empty() && static_cast<int>(values.size()) != n) {
    raise(ErrorKind::kSchema, "values and bids differ in length");
  }
  AuctionResult result;
  result.first_round_order = first_round_order(bids.first_round);
  result.win_probability.assign(static_cast<std::size_t>(n), 0.0);
  result.expected_payment.assign(static_cast<std::size_t>(n), 0.0);

  const auto& subsets = mech.selection().subsets();
  const auto probs = mech.selection().probs();
  result.table.reserve(subsets.size());
  for (std::size_t k = 0; k < subsets.size(); ++k) {
    result.table.push_back(outcome_for(mech, bids, result.first_round_order, subsets[k], probs[k]));
  }
  // Fixed summation order: table order, then rank order inside each outcome.
  for (const auto& row : result.table) {
    for (std::size_t j = 0; j < row.round.bidders.size(); ++j) {
      const auto b = static_cast<std::size_t>(row.round.bidders[j]);
      result.win_probability[b] += row.probability * row.round.allocation[j];
      result.expected_payment[b] += row.probability * row.round.payment[j];
    }
    result.revenue += row.probability * row.payment;
  }
  if (!values.empty()) {
    result.utilities.resize(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < result.utilities.size(); ++i) {
      result.utilities[i] = values[i] * result.win_probability[i] - result.expected_payment[i];
    }
  }
  return result;
}

double expected_utility(const Mechanism& mech, std::span<const double> values, const BidProfile& bids, int bidder) {
  if (bidder < 0 || bidder >= bids.size()) raise(ErrorKind::kInvalidArgument, "bidder index out of range");
  return evaluate(mech, bids, values).utilities[static_cast<std::size_t>(bidder)];
}

double expected_revenue(const Mechanism& mech, const BidProfile& bids) { return evaluate(mech, bids).revenue; }

bool line_of_competition_holds(const Mechanism& mech, const BidProfile& bids, const SubsetOutcome& outcome) {
  std::vector<double> first = bids.first_round;
  std::sort(first.begin(), first.end(), std::greater<>());
  const int beta = mech.beta();
  const double s_beta = outcome.round.bids[static_cast<std::size_t>(beta - 1)];
  const double b_line = first[static_cast<std::size_t>(mech.competition_depth() - 1)];
  return s_beta >= b_line;
}

RealizedRun simulate_run(const Mechanism& mech, const BidProfile& bids, SplitMix64& rng) {
  validate_profile(mech, bids);
  const auto order = first_round_order(bids.first_round);
  const auto& positions = sample_subset(mech.selection(), rng);
  const SubsetOutcome outcome = outcome_for(mech, bids, order, positions, 1.0);
  if (!line_of_competition_holds(mech, bids, outcome)) {
    raise(ErrorKind::kInvariant, "line of competition violated in a simulated run");
  }
  RealizedRun run;
  run.positions = positions;
  run.round = outcome.round;
  const double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t j = 0; j < run.round.bidders.size(); ++j) {
    const double xj = run.round.allocation[j];
    if (xj <= 0.0) break;
    acc += xj;
    if (u < acc) {
      run.winner = run.round.bidders[j];
      run.payment = run.round.payment[j] / xj;
      break;
    }
  }
  return run;
}

}  // namespace tworound
