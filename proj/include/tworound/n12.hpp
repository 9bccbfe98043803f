#pragma once

// The theta = 4, alpha = 3, beta = 2 example: closed-form conditions for the
// six orderings of the top three bidders, and an enumeration oracle.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "tworound/engine.hpp"
#include "tworound/equilibrium.hpp"
#include "tworound/selection.hpp"

namespace tworound {

struct N12Params {
  /// v1 > v2 > v3 > v4 > v5; v5 only fills the field below theta.
  std::array<double, 5> v{};
  /// Exclusion-indexed over the four 3-subsets.
  std::array<double, 4> y{};
  double x2 = 0.25;
  /// Optional first-round bid for bidders 1..3 (index 0..2).
  std::array<std::optional<double>, 3> bid_override{};
  /// Gap used when a bidder must outbid a higher-valued bidder below it.
  double step = kDefaultBidStep;

  double x1() const noexcept { return 1.0 - x2; }
  void validate() const;
};

/// (e - w) / (w - f)
double v23(double w, double e, double f);
/// (e - w)(x1 - x2) / ((g - f) x2 - (g - w) x1)
double v12(double w, double e, double g, double f, double x2);
/// (Y2 - Y3) x2 / (Y1 x2 + Y4 (x1 - x2))
double ycoef23(const std::array<double, 4>& y, double x2);
/// (Y3 - Y4) / (Y1 + Y2)
double ycoef12(const std::array<double, 4>& y);

/// Bidders (1-based) by position 1..3; bidder 4 sits at position 4.
using N12Rank = std::array<int, 3>;

/// The six orderings, ascending by inversion count then lexicographically.
const std::array<N12Rank, 6>& n12_ranks();

enum class N12Swap { kOneTwo, kTwoThree };
const char* to_string(N12Swap s);

struct N12Condition {
  int bidder = 0;
  int position = 0;
  N12Swap swap = N12Swap::kTwoThree;
  /// Arguments as (own value; bids...) in table order.
  std::vector<double> args;
  double v_value = 0.0;
  double y_value = 0.0;
  /// Direction as tabulated: V < Y (true) or V > Y (false).
  bool needs_less = true;
  /// The V12 denominator is negative, which reverses the tabulated direction.
  bool flipped = false;
  /// The V12 denominator is zero; the verdict comes from the numerator.
  bool degenerate = false;
  bool holds = false;
  bool indeterminate = false;
  bool underlined = false;
  bool auto_satisfied = false;
};

struct N12Report {
  N12Rank rank{};
  std::array<double, 4> bids{};
  double ycoef23 = 0.0;
  double ycoef12 = 0.0;
  std::vector<N12Condition> conditions;
  bool is_ne = false;
  bool indeterminate = false;
};

/// First-round bids by position: truthful unless the bidder must outbid a
/// higher-valued bidder below it.
std::array<double, 4> n12_bids(const N12Params& params, const N12Rank& rank);

N12Report n12_check_rank(const N12Params& params, const N12Rank& rank);
std::vector<N12Report> n12_check_all(const N12Params& params);

Mechanism n12_mechanism(const N12Params& params);

struct N12OracleResult {
  /// utility[k][t-1] for the position-(k+1) bidder moved to position t.
  std::array<std::array<double, 3>, 3> utility{};
  /// The same six adjacent comparisons, decided by enumeration.
  std::array<bool, 6> holds{};
  std::array<double, 6> margin{};
  bool is_ne = false;
};

N12OracleResult n12_oracle(const N12Params& params, const N12Rank& rank);

}  // namespace tworound
