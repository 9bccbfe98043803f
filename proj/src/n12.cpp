#include "tworound/n12.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tworound/errors.hpp"

namespace tworound {

void N12Params::validate() const {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i]) || v[i] <= 0.0) raise(ErrorKind::kSchema, "valuations must be positive");
    if (i > 0 && !(v[i - 1] > v[i])) raise(ErrorKind::kSchema, "valuations must be strictly decreasing");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!std::isfinite(y[i]) || y[i] < 0.0) raise(ErrorKind::kSchema, "Y entries must be nonnegative");
    if (i > 0 && !(y[i - 1] > y[i])) raise(ErrorKind::kSchema, "Y must be strictly decreasing");
    total += y[i];
  }
  if (std::abs(total - 1.0) > kNormalizeTolerance) raise(ErrorKind::kSchema, "Y entries must sum to 1");
  if (!(x2 > 0.0 && x2 <= 0.5)) raise(ErrorKind::kSchema, "x2 must lie in (0, 0.5]");
  if (!(step > 0.0)) raise(ErrorKind::kSchema, "bid step must be positive");
}

double v23(double w, double e, double f) {
  if (w == f) raise(ErrorKind::kDomain, "V23: zero denominator d1 - d4");
  return (e - w) / (w - f);
}

double v12(double w, double e, double g, double f, double x2) {
  const double x1 = 1.0 - x2;
  const double k = (g - f) * x2 - (g - w) * x1;
  if (k == 0.0) raise(ErrorKind::kDomain, "V12: zero denominator (d3 - d4) x2 - (d3 - d1) x1");
  return (e - w) * (x1 - x2) / k;
}

double ycoef23(const std::array<double, 4>& y, double x2) {
  const double x1 = 1.0 - x2;
  const double den = y[0] * x2 + y[3] * (x1 - x2);
  if (den == 0.0) raise(ErrorKind::kDomain, "Y23: zero denominator Y1 x2 + Y4 (x1 - x2)");
  return (y[1] - y[2]) * x2 / den;
}

double ycoef12(const std::array<double, 4>& y) {
  const double den = y[0] + y[1];
  if (den == 0.0) raise(ErrorKind::kDomain, "Y12: zero denominator Y1 + Y2");
  return (y[2] - y[3]) / den;
}

const std::array<N12Rank, 6>& n12_ranks() {
  static const std::array<N12Rank, 6> ranks{{{1, 2, 3}, {1, 3, 2}, {2, 1, 3}, {3, 1, 2}, {2, 3, 1}, {3, 2, 1}}};
  return ranks;
}

const char* to_string(N12Swap s) { return s == N12Swap::kOneTwo ? "1<->2" : "2<->3"; }

namespace {

// Conditions that need no check: (rank, position, swap).
bool is_underlined(const N12Rank& rank, int position, N12Swap swap) {
  const int bidder = rank[static_cast<std::size_t>(position - 1)];
  const bool two_three = swap == N12Swap::kTwoThree;
  if (rank == N12Rank{1, 2, 3}) return bidder == 1 || (bidder == 2 && two_three);
  if (rank == N12Rank{1, 3, 2}) return bidder == 1 && two_three;
  if (rank == N12Rank{2, 1, 3}) return (bidder == 1 || bidder == 2) && two_three;
  if (rank == N12Rank{3, 1, 2}) return bidder == 1 && two_three;
  return false;
}

void check_rank(const N12Rank& rank) {
  N12Rank sorted = rank;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != N12Rank{1, 2, 3}) raise(ErrorKind::kInvalidArgument, "rank must be a permutation of 1,2,3");
}

}  // namespace

std::array<double, 4> n12_bids(const N12Params& params, const N12Rank& rank) {
  check_rank(rank);
  std::array<double, 4> bids{};
  bids[3] = params.v[3];
  for (int p = 3; p >= 1; --p) {
    const int bidder = rank[static_cast<std::size_t>(p - 1)];
    const double w = params.v[static_cast<std::size_t>(bidder - 1)];
    const double below = bids[static_cast<std::size_t>(p)];
    const auto& over = params.bid_override[static_cast<std::size_t>(bidder - 1)];
    double b = w > below ? w : below + params.step;
    if (over) b = *over;
    if (!(b > below)) {
      raise(ErrorKind::kInvalidArgument, "bid of bidder " + std::to_string(bidder) + " must exceed the bid below it");
    }
    bids[static_cast<std::size_t>(p - 1)] = b;
  }
  return bids;
}

N12Report n12_check_rank(const N12Params& params, const N12Rank& rank) {
  params.validate();
  N12Report report;
  report.rank = rank;
  report.bids = n12_bids(params, rank);
  const auto& y = params.y;
  const double x1 = params.x1();
  const double x2 = params.x2;
  report.ycoef23 = ycoef23(y, x2);
  report.ycoef12 = ycoef12(y);
  const auto& P = report.bids;

  for (int p = 1; p <= 3; ++p) {
    const int bidder = rank[static_cast<std::size_t>(p - 1)];
    const double w = params.v[static_cast<std::size_t>(bidder - 1)];
    // Position 1 and 2 bidders want u(2) > u(3); position 3 wants the reverse.
    {
      N12Condition c;
      c.bidder = bidder;
      c.position = p;
      c.swap = N12Swap::kTwoThree;
      const double e = p == 3 ? P[1] : P[2];
      const double f = P[3];
      c.args = {w, e, f};
      c.v_value = v23(w, e, f);
      c.y_value = report.ycoef23;
      c.needs_less = p != 3;
      c.holds = c.needs_less ? c.v_value < c.y_value : c.v_value > c.y_value;
      c.indeterminate = std::abs(c.v_value - c.y_value) < kStrictTolerance;
      c.auto_satisfied = c.needs_less && c.v_value < 0.0 && c.y_value >= 0.0;
      c.underlined = is_underlined(rank, p, c.swap);
      report.conditions.push_back(std::move(c));
    }
    // Position 1 wants u(1) > u(2); positions 2 and 3 want the reverse.
    {
      N12Condition c;
      c.bidder = bidder;
      c.position = p;
      c.swap = N12Swap::kOneTwo;
      const double e = p == 1 ? P[1] : P[0];
      const double g = p == 3 ? P[1] : P[2];
      const double f = P[3];
      c.args = {w, e, g, f};
      c.y_value = report.ycoef12;
      c.needs_less = p == 1;
      const double k = (g - f) * x2 - (g - w) * x1;
      if (k == 0.0) {
        c.degenerate = true;
        c.v_value = std::numeric_limits<double>::quiet_NaN();
        const double d = -(y[0] + y[1]) * (e - w) * (x1 - x2);
        c.holds = c.needs_less ? d > 0.0 : d < 0.0;
        c.indeterminate = std::abs(d) < kStrictTolerance;
      } else {
        c.v_value = v12(w, e, g, f, x2);
        c.flipped = k < 0.0;
        const bool less = c.needs_less != c.flipped;
        c.holds = less ? c.v_value < c.y_value : c.v_value > c.y_value;
        c.indeterminate = std::abs(c.v_value - c.y_value) < kStrictTolerance;
        c.auto_satisfied = less && c.v_value < 0.0 && c.y_value >= 0.0;
      }
      c.underlined = is_underlined(rank, p, c.swap);
      report.conditions.push_back(std::move(c));
    }
  }
  report.is_ne = true;
  for (const auto& c : report.conditions) {
    if (c.indeterminate) report.indeterminate = true;
    if (!c.holds) report.is_ne = false;
  }
  return report;
}

std::vector<N12Report> n12_check_all(const N12Params& params) {
  std::vector<N12Report> out;
  for (const auto& r : n12_ranks()) out.push_back(n12_check_rank(params, r));
  return out;
}

Mechanism n12_mechanism(const N12Params& params) {
  ExclusionY y(std::vector<double>(params.y.begin(), params.y.end()));
  return Mechanism(from_exclusion_Y(y), AllocationRule({params.x1(), params.x2, 0.0}));
}

N12OracleResult n12_oracle(const N12Params& params, const N12Rank& rank) {
  params.validate();
  const auto pos_bids = n12_bids(params, rank);
  std::vector<double> bids(5);
  for (int p = 1; p <= 3; ++p) {
    bids[static_cast<std::size_t>(rank[static_cast<std::size_t>(p - 1)] - 1)] = pos_bids[static_cast<std::size_t>(p - 1)];
  }
  bids[3] = params.v[3];
  bids[4] = params.v[4];
  const std::vector<double> values(params.v.begin(), params.v.end());
  const auto check = is_nash_equilibrium(n12_mechanism(params), values, RankProfile::from_bids(std::move(bids)),
                                         params.step);
  N12OracleResult out;
  out.is_ne = check.is_ne;
  for (int p = 1; p <= 3; ++p) {
    const auto& dev = check.bidders[static_cast<std::size_t>(rank[static_cast<std::size_t>(p - 1)] - 1)];
    auto& u = out.utility[static_cast<std::size_t>(p - 1)];
    for (int t = 0; t < 3; ++t) u[static_cast<std::size_t>(t)] = dev.utility_at[static_cast<std::size_t>(t)];
    // Same order as the report: 2<->3 first, then 1<->2.
    const double d23 = u[1] - u[2];
    const double d12 = u[0] - u[1];
    const auto k = static_cast<std::size_t>(2 * (p - 1));
    out.margin[k] = p == 3 ? -d23 : d23;
    out.margin[k + 1] = p == 1 ? d12 : -d12;
    out.holds[k] = out.margin[k] > 0.0;
    out.holds[k + 1] = out.margin[k + 1] > 0.0;
  }
  return out;
}

}  // namespace tworound
