#include <doctest.h>

#include "generators.hpp"
#include "tworound/equilibrium.hpp"
#include "tworound/errors.hpp"

using namespace tworound;

namespace {

const std::vector<double> kV{450, 350, 200};

bool profile_is_ne(const ExclusionY& y, const std::vector<double>& values, const RankProfile& rank) {
  return is_nash_equilibrium(n11_mechanism(y), values, rank).is_ne;
}

}  // namespace

TEST_CASE("placement bids") {
  const std::vector<double> others{10, 8, 7.99, 5};
  CHECK(placement_bid(others, 1, 0.01) == doctest::Approx(10.01));
  CHECK(placement_bid(others, 2, 0.01) == doctest::Approx(8.01));
  CHECK(placement_bid(others, 3, 0.01) == doctest::Approx(7.995));
  CHECK(placement_bid(others, 5, 0.01) == doctest::Approx(4.99));
  CHECK(placement_bid(std::vector<double>{10, 0.004}, 3, 0.01) == doctest::Approx(0.002));
  CHECK_THROWS_AS(placement_bid(others, 6, 0.01), Error);
  CHECK_THROWS_AS(placement_bid(others, 0, 0.01), Error);
}

TEST_CASE("rank profiles need distinct bids") {
  const auto r = RankProfile::from_bids({350, 633.34, 200});
  CHECK(r.order() == std::vector<int>{1, 0, 2});
  CHECK(r.position_of(0) == 2);
  CHECK_THROWS_AS(RankProfile::from_bids({3, 3, 1}), Error);
}

TEST_CASE("truthful order is an equilibrium under the example Y") {
  const ExclusionY y({0.6, 0.25, 0.15});
  const auto check = is_nash_equilibrium(n11_mechanism(y), kV, n11_profile(N11Rank::kTruthful, kV));
  CHECK(check.is_ne);
  REQUIRE(check.bidders.size() == 3);
  // Bidder 2 stays: wins only in {2,3}, 0.15 * 150. Jumps to position 1 with
  // 450.01 in both rounds: pays 450 in {1,2} and 200 in {1,3}.
  CHECK(check.bidders[1].current_utility == doctest::Approx(22.5));
  CHECK(check.bidders[1].utility_at[0] == doctest::Approx(0.6 * -100.0 + 0.25 * 150.0));
  CHECK(check.bidders[1].utility_at[1] == doctest::Approx(22.5));
}

TEST_CASE("risky order with an overbid of 650 is an equilibrium under Y'") {
  const ExclusionY y({0.45, 0.44, 0.11});
  CHECK(profile_is_ne(y, kV, n11_profile(N11Rank::kRisky, kV, 650.0)));
  CHECK_FALSE(profile_is_ne(y, kV, n11_profile(N11Rank::kTruthful, kV)));
  // Below the witness bid the top bidder prefers to jump over.
  CHECK_FALSE(profile_is_ne(y, kV, n11_profile(N11Rank::kRisky, kV, 600.0)));
}

TEST_CASE("n11 classification examples") {
  const auto t = n11_classify(450, 350, 200, ExclusionY({0.6, 0.25, 0.15}));
  CHECK(t.truthful_ne);
  CHECK_FALSE(t.risky_ne);
  CHECK(t.ratio == doctest::Approx(2.0 / 3.0));
  CHECK(t.threshold == doctest::Approx(1.0 / 6.0));
  CHECK_FALSE(t.risky_bid.has_value());

  const auto r = n11_classify(450, 350, 200, ExclusionY({0.45, 0.44, 0.11}));
  CHECK(r.risky_ne);
  CHECK_FALSE(r.truthful_ne);
  CHECK(r.threshold == doctest::Approx(0.33 / 0.45));
  REQUIRE(r.risky_bid.has_value());
  CHECK(*r.risky_bid == doctest::Approx(633.34));
  CHECK((*r.risky_bid - 450) / 250 > r.threshold);
  CHECK((*r.risky_bid - 0.01 - 450) / 250 <= r.threshold);
}

TEST_CASE("risky order never qualifies at the 1/(theta-2) ratio") {
  SplitMix64 rng(6);
  for (int i = 0; i < 2000; ++i) {
    const auto y = testing::random_ordered_Y(rng, 6);
    CHECK_FALSE(n11_classify(450, 400, 200, y).risky_ne);
  }
}

TEST_CASE("n11 classification errors") {
  const ExclusionY y({0.6, 0.25, 0.15});
  const auto kind_of = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::kInvalidArgument;
  };
  CHECK(kind_of([&] { n11_classify(450, 200, 200, y); }) == ErrorKind::kDegenerateRatio);
  CHECK(kind_of([&] { n11_classify(300, 350, 200, y); }) == ErrorKind::kInvalidArgument);
  CHECK(kind_of([&] { n11_classify(450, 350, 200, ExclusionY({0.25, 0.6, 0.15})); }) == ErrorKind::kDomain);
  CHECK(kind_of([&] { n11_classify(450, 350, 200, ExclusionY({0.5, 0.5})); }) == ErrorKind::kDomain);
  CHECK(kind_of([&] { n11_classify(450, 350, 200, ExclusionY({0.3, 0.36, 0.34})); }) == ErrorKind::kDomain);
  CHECK(kind_of([&] { n11_lemma3_threshold(200, 200, 200); }) == ErrorKind::kDegenerateRatio);
  CHECK(kind_of([&] { n11_supremum_bound(450, 350, ExclusionY({0.5, 0.25, 0.25})); }) == ErrorKind::kDomain);
}

TEST_CASE("closed-form revenues") {
  CHECK(n11_revenue(N11Rank::kTruthful, 450, 350, 200, ExclusionY({0.6, 0.25, 0.15})) == doctest::Approx(290));
  CHECK(n11_revenue(N11Rank::kRisky, 450, 350, 200, ExclusionY({0.45, 0.44, 0.11})) == doctest::Approx(312.5));
  CHECK(n11_revenue(N11Rank::kRisky, 450, 350, 200, ExclusionY({0.7, 0.2, 0.1})) == doctest::Approx(375));
  CHECK(n11_revenue(N11Rank::kRisky, 450, 350, 200, ExclusionY({1.0, 0.0, 0.0})) == doctest::Approx(450));
}

TEST_CASE("closed-form revenue matches enumeration on induced profiles") {
  SplitMix64 rng(12);
  for (int i = 0; i < 300; ++i) {
    const int theta = testing::uniform_int(rng, 3, 6);
    const auto v = testing::random_values3(rng);
    const auto y = testing::random_ordered_Y(rng, theta);
    const auto values = n11_values(v[0], v[1], v[2], theta);
    const auto mech = n11_mechanism(y);
    const auto truthful = n11_profile(N11Rank::kTruthful, values);
    CHECK(expected_revenue(mech, BidProfile::same_in_both_rounds(truthful.bids())) ==
          doctest::Approx(n11_revenue(N11Rank::kTruthful, v[0], v[1], v[2], y)).epsilon(1e-12));
    const auto risky = n11_profile(N11Rank::kRisky, values, v[0] + 1.0);
    CHECK(expected_revenue(mech, BidProfile::same_in_both_rounds(risky.bids())) ==
          doctest::Approx(n11_revenue(N11Rank::kRisky, v[0], v[1], v[2], y)).epsilon(1e-12));
  }
}

TEST_CASE("closed-form classification agrees with the position-deviation check") {
  SplitMix64 rng(500);
  int checked = 0;
  int risky_seen = 0;
  int truthful_seen = 0;
  while (checked < 500) {
    const int theta = testing::uniform_int(rng, 3, 5);
    const auto v = testing::random_values3(rng);
    if (v[0] - v[1] < 1e-3 || v[1] - v[2] < 1e-3) continue;
    const auto y = testing::random_ordered_Y(rng, theta);
    const auto c = n11_classify(v[0], v[1], v[2], y);
    if (std::abs(c.ratio - c.threshold) < 1e-6) continue;
    ++checked;
    const auto values = n11_values(v[0], v[1], v[2], theta);
    REQUIRE(profile_is_ne(y, values, n11_profile(N11Rank::kTruthful, values)) == c.truthful_ne);
    // Risky order: an equilibrium bid exists somewhere above v1 iff risky_ne.
    bool found = false;
    const double span = v[0] - v[2];
    for (int k = 1; k <= 40 && !found; ++k) {
      const double b = v[0] + span * (k / 20.0) + 0.005;
      found = profile_is_ne(y, values, n11_profile(N11Rank::kRisky, values, b));
    }
    REQUIRE(found == c.risky_ne);
    if (c.risky_ne) {
      ++risky_seen;
      CHECK(profile_is_ne(y, values, n11_profile(N11Rank::kRisky, values, *c.risky_bid)));
    } else {
      ++truthful_seen;
    }
  }
  CHECK(risky_seen > 20);
  CHECK(truthful_seen > 20);
}

TEST_CASE("accepted Y satisfy the bounds and the threshold cap") {
  SplitMix64 rng(3);
  for (int i = 0; i < 5000; ++i) {
    const int theta = testing::uniform_int(rng, 3, 8);
    const auto y = testing::random_ordered_Y(rng, theta);
    CHECK(y.second_last() < 1.0 / (theta - 1));
    CHECK(y.last() < 1.0 / theta);
    const auto c = n11_classify(450, 350, 200, y);
    CHECK(c.threshold < 1.0 / (theta - 2));
  }
}

TEST_CASE("revenue-beats-v2 threshold") {
  CHECK(n11_lemma3_threshold(450, 350, 200) == doctest::Approx(0.4));
  CHECK(n11_lemma3_threshold(450, 450, 200) == 0.0);
  SplitMix64 rng(4);
  for (int i = 0; i < 2000; ++i) {
    const auto v = testing::random_values3(rng);
    const auto y = testing::random_ordered_Y(rng, testing::uniform_int(rng, 3, 5));
    const double t = n11_lemma3_threshold(v[0], v[1], v[2]);
    const double tail = y.second_last() + y.last();
    if (std::abs(tail - t) < 1e-9) continue;
    CHECK((n11_revenue(N11Rank::kRisky, v[0], v[1], v[2], y) > v[1]) == (tail < t));
  }
}

TEST_CASE("supremum bound") {
  const ExclusionY y({0.45, 0.44, 0.11});
  CHECK(n11_supremum_bound(450, 350, y) == doctest::Approx(320));
  // Every v3 keeping the risky order feasible stays below the bound.
  for (double v3 = 1; v3 < 350; v3 += 0.5) {
    const auto c = n11_classify(450, 350, v3, y);
    if (!c.risky_ne) continue;
    CHECK(n11_revenue(N11Rank::kRisky, 450, 350, v3, y) < n11_supremum_bound(450, 350, y));
  }
  CHECK(n11_supremum_bound(450, 450, y) == doctest::Approx(450));
  CHECK(n11_supremum_bound(450, 350, ExclusionY({0.7, 0.3, 0.0})) == doctest::Approx(350));
}

TEST_CASE("better-Y construction from the example") {
  const auto c = n11_construct_better_Y(ExclusionY({0.6, 0.25, 0.15}), 450, 350, 200);
  CHECK(c.branch == 2);
  CHECK(c.truthful_revenue == doctest::Approx(290));
  CHECK(c.risky_revenue > 290);
  CHECK((c.y.at(2) - c.y.at(3)) / c.y.at(1) > 2.0 / 3.0);
  const auto cls = n11_classify(450, 350, 200, c.y);
  CHECK(cls.risky_ne);
  CHECK(n11_revenue(N11Rank::kRisky, 450, 350, 200, c.y) == doctest::Approx(c.risky_revenue));
}

TEST_CASE("better-Y construction near a valuation tie keeps the tail mass") {
  const auto c = n11_construct_better_Y(ExclusionY({0.5, 0.2505, 0.2495}), 450, 449, 200);
  CHECK(c.branch == 1);
  CHECK(n11_classify(450, 449, 200, c.y).risky_ne);
  CHECK(c.risky_revenue > c.truthful_revenue);
}

TEST_CASE("better-Y construction rejects non-truthful input and reports empty intervals") {
  CHECK_THROWS_AS(n11_construct_better_Y(ExclusionY({0.45, 0.44, 0.11}), 450, 350, 200), Error);
  // theta = 4, v = (450, 100, 50): lower bound 350/400 exceeds 1/(theta-1).
  try {
    n11_construct_better_Y(ExclusionY({0.4, 0.3, 0.2, 0.1}), 450, 100, 50);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kConstructionFailure);
    CHECK(std::string(e.what()).find("empty interval") != std::string::npos);
  }
}
