#include "tworound/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include "tworound/errors.hpp"

namespace tworound {

RankProfile RankProfile::from_bids(std::vector<double> bids) {
  RankProfile r;
  r.order_ = first_round_order(bids);
  for (std::size_t p = 1; p < r.order_.size(); ++p) {
    if (!(bids[static_cast<std::size_t>(r.order_[p - 1])] > bids[static_cast<std::size_t>(r.order_[p])])) {
      raise(ErrorKind::kInvalidArgument, "rank profile bids must be distinct");
    }
  }
  r.bids_ = std::move(bids);
  return r;
}

int RankProfile::position_of(int bidder) const {
  const auto it = std::find(order_.begin(), order_.end(), bidder);
  if (it == order_.end()) raise(ErrorKind::kInvalidArgument, "unknown bidder");
  return static_cast<int>(it - order_.begin()) + 1;
}

double placement_bid(std::span<const double> others_sorted, int t, double step) {
  const int m = static_cast<int>(others_sorted.size());
  if (t < 1 || t > m + 1) raise(ErrorKind::kInvalidArgument, "placement position out of range");
  if (t == m + 1) {
    const double last = others_sorted[static_cast<std::size_t>(m - 1)];
    return last - std::min(step, last / 2.0);
  }
  const double incumbent = others_sorted[static_cast<std::size_t>(t - 1)];
  if (t == 1) return incumbent + step;
  const double gap = others_sorted[static_cast<std::size_t>(t - 2)] - incumbent;
  return incumbent + std::min(step, gap / 2.0);
}

NeCheck is_nash_equilibrium(const Mechanism& mech, std::span<const double> values, const RankProfile& rank,
                            double step) {
  const int n = rank.size();
  if (static_cast<int>(values.size()) != n) raise(ErrorKind::kSchema, "values and rank profile differ in length");
  const int depth = mech.competition_depth();
  const auto base = evaluate(mech, BidProfile::same_in_both_rounds(rank.bids()), values);

  NeCheck check;
  for (int i = 0; i < n; ++i) {
    BidderDeviations dev;
    dev.bidder = i;
    dev.position = rank.position_of(i);
    dev.current_utility = base.utilities[static_cast<std::size_t>(i)];
    dev.best_position = dev.position;
    std::vector<double> others;
    others.reserve(static_cast<std::size_t>(n - 1));
    for (int j = 0; j < n; ++j) {
      if (j != i) others.push_back(rank.bids()[static_cast<std::size_t>(j)]);
    }
    std::sort(others.begin(), others.end(), std::greater<>());
    double best = dev.current_utility;
    for (int t = 1; t <= depth; ++t) {
      double u = dev.current_utility;
      if (t != dev.position) {
        std::vector<double> bids = rank.bids();
        bids[static_cast<std::size_t>(i)] = placement_bid(others, t, step);
        u = expected_utility(mech, values, BidProfile::same_in_both_rounds(std::move(bids)), i);
      }
      dev.utility_at.push_back(u);
      if (u > dev.current_utility + kStrictTolerance) {
        dev.gains = true;
        if (u > best) {
          best = u;
          dev.best_position = t;
        }
      }
    }
    if (dev.gains) check.is_ne = false;
    check.bidders.push_back(std::move(dev));
  }
  return check;
}

const char* to_string(N11Rank r) { return r == N11Rank::kTruthful ? "truthful" : "risky"; }

namespace {

void check_values(double v1, double v2, double v3) {
  if (!(v1 >= v2 && v2 >= v3 && v3 > 0.0) || !std::isfinite(v1)) {
    raise(ErrorKind::kInvalidArgument, "valuations must satisfy v1 >= v2 >= v3 > 0");
  }
}

void check_n11_y(const ExclusionY& y) {
  if (y.theta() < 3) raise(ErrorKind::kDomain, "this mode needs theta >= 3");
  if (!y.ordered()) raise(ErrorKind::kDomain, "Y must satisfy Y_i > Y_{theta-1} > Y_theta for i <= theta-2");
  if (!y.within_bounds()) raise(ErrorKind::kDomain, "Y_{theta-1} < 1/(theta-1) and Y_theta < 1/theta required");
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

N11Classification n11_classify(double v1, double v2, double v3, const ExclusionY& y, double step) {
  check_values(v1, v2, v3);
  if (v2 == v3) raise(ErrorKind::kDegenerateRatio, "v2 == v3 leaves the classification undefined");
  check_n11_y(y);
  if (!(step > 0.0)) raise(ErrorKind::kInvalidArgument, "bid step must be positive");
  N11Classification c;
  c.theta = y.theta();
  c.ratio = (v1 - v2) / (v2 - v3);
  c.threshold = (y.second_last() - y.last()) / y.head_sum();
  if (std::abs(c.ratio - c.threshold) < kStrictTolerance) {
    c.indeterminate = true;
    return c;
  }
  c.truthful_ne = c.ratio > c.threshold;
  c.risky_ne = c.ratio < c.threshold;
  if (c.risky_ne) {
    // (b - v1) / (v1 - v3) > threshold
    const double bound = v1 + c.threshold * (v1 - v3);
    double k = std::floor(bound / step) + 1.0;
    while ((k * step - v1) / (v1 - v3) <= c.threshold) k += 1.0;
    c.risky_bid = k * step;
  }
  return c;
}

double n11_revenue(N11Rank rank, double v1, double v2, double v3, const ExclusionY& y) {
  const double tail = y.second_last() + y.last();
  const double top = rank == N11Rank::kTruthful ? v2 : v1;
  return y.head_sum() * top + tail * v3;
}

double n11_supremum_bound(double v1, double v2, const ExclusionY& y) {
  const double a = y.second_last();
  const double b = y.last();
  if (a == b) raise(ErrorKind::kDomain, "supremum bound needs Y_{theta-1} != Y_theta");
  return ((a + b) * (1.0 - 2.0 * b) * v2 - 2.0 * b * y.head_sum() * v1) / (a - b);
}

double n11_lemma3_threshold(double v1, double v2, double v3) {
  if (v1 == v3) raise(ErrorKind::kDegenerateRatio, "v1 == v3 leaves the threshold undefined");
  return (v1 - v2) / (v1 - v3);
}

N11Construction n11_construct_better_Y(const ExclusionY& y, double v1, double v2, double v3) {
  const auto base = n11_classify(v1, v2, v3, y);
  if (!base.truthful_ne) raise(ErrorKind::kInvalidArgument, "construction needs a truthful-feasible Y");
  const int theta = y.theta();
  const double r = base.ratio;
  const double c = y.second_last() + y.last();
  const double lower = n11_lemma3_threshold(v1, v2, v3);
  const double upper = c + lower * (1.0 - c);
  const double cap = 1.0 / static_cast<double>(theta - 1);
  const double hi = std::min(upper, cap);
  const auto fail = [&](const std::string& why) {
    raise(ErrorKind::kConstructionFailure,
          why + ": need (v1-v2)/(v1-v3)=" + fmt(lower) + " < Y'_{theta-1}+Y'_theta < min(" + fmt(upper) +
              ", 1/(theta-1)=" + fmt(cap) + ")");
  };
  if (!(lower + 2.0 * kStrictTolerance < hi)) fail("empty interval");

  const int branch = c > lower ? 1 : 2;
  double target = 0.5 * (lower + hi);
  if (branch == 1 && c < hi - kStrictTolerance) target = c;

  // Y'_theta = delta small enough that the risky condition holds with room.
  const double delta_max = 0.5 * (target - r * (1.0 - target));
  const double delta = 0.5 * delta_max;
  std::vector<double> next(static_cast<std::size_t>(theta));
  next[static_cast<std::size_t>(theta - 1)] = delta;
  next[static_cast<std::size_t>(theta - 2)] = target - delta;
  const double head = 1.0 - target;
  const double old_head = y.head_sum();
  bool rescaled_ok = true;
  for (int i = 0; i < theta - 2; ++i) {
    const double v = y.values()[static_cast<std::size_t>(i)] * head / old_head;
    next[static_cast<std::size_t>(i)] = v;
    if (!(v > target - delta + kStrictTolerance)) rescaled_ok = false;
  }
  if (!rescaled_ok) {
    for (int i = 0; i < theta - 2; ++i) next[static_cast<std::size_t>(i)] = head / (theta - 2);
  }
  ExclusionY candidate(std::move(next));
  if (!candidate.ordered() || !candidate.within_bounds()) fail("candidate violates ordering or bounds");
  const auto cls = n11_classify(v1, v2, v3, candidate);
  if (!cls.risky_ne || cls.threshold <= r + kStrictTolerance) fail("candidate is not risky-feasible");
  const double truthful = n11_revenue(N11Rank::kTruthful, v1, v2, v3, y);
  const double risky = n11_revenue(N11Rank::kRisky, v1, v2, v3, candidate);
  if (!(risky > truthful + kStrictTolerance)) fail("candidate revenue does not improve");
  return N11Construction{std::move(candidate), branch, truthful, risky};
}

Mechanism n11_mechanism(const ExclusionY& y) {
  std::vector<double> x(static_cast<std::size_t>(y.theta() - 1), 0.0);
  x[0] = 1.0;
  return Mechanism(from_exclusion_Y(y), AllocationRule(std::move(x)));
}

std::vector<double> n11_values(double v1, double v2, double v3, int theta) {
  std::vector<double> v{v1, v2, v3};
  for (int k = 4; k <= theta; ++k) v.push_back(v3 * (theta + 1 - k) / (theta - 1));
  return v;
}

RankProfile n11_profile(N11Rank rank, std::span<const double> values, double risky_bid) {
  std::vector<double> bids(values.begin(), values.end());
  if (rank == N11Rank::kRisky) {
    if (!(risky_bid > values[0])) raise(ErrorKind::kInvalidArgument, "risky bid must exceed v1");
    bids[1] = risky_bid;
  }
  return RankProfile::from_bids(std::move(bids));
}

}  // namespace tworound
