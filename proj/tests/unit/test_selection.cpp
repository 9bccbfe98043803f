#include <doctest.h>

#include <map>

#include "tworound/errors.hpp"
#include "tworound/rng.hpp"
#include "tworound/selection.hpp"

using namespace tworound;

TEST_CASE("enumerate_subsets lists alpha-subsets lexicographically") {
  CHECK(enumerate_subsets(3, 2) == std::vector<Subset>{{1, 2}, {1, 3}, {2, 3}});
  CHECK(enumerate_subsets(4, 3) == std::vector<Subset>{{1, 2, 3}, {1, 2, 4}, {1, 3, 4}, {2, 3, 4}});
  CHECK(enumerate_subsets(5, 5) == std::vector<Subset>{{1, 2, 3, 4, 5}});
}

TEST_CASE("enumerate_subsets count matches the binomial coefficient") {
  for (int theta = 1; theta <= 12; ++theta) {
    for (int alpha = 1; alpha <= theta; ++alpha) {
      const auto subsets = enumerate_subsets(theta, alpha);
      CHECK(subsets.size() == binomial(theta, alpha));
      CHECK(std::is_sorted(subsets.begin(), subsets.end()));
      CHECK(std::adjacent_find(subsets.begin(), subsets.end()) == subsets.end());
    }
  }
}

TEST_CASE("enumerate_subsets rejects alpha > theta") {
  try {
    enumerate_subsets(3, 4);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kInvalidArgument);
  }
  CHECK_THROWS_AS(enumerate_subsets(21, 2), Error);
}

TEST_CASE("marginals sum over containing subsets") {
  const SelectionDistribution d(4, 3, {0.1, 0.2, 0.3, 0.4});
  const auto y = marginal_probabilities(d);
  CHECK(y[0] == doctest::Approx(0.6));
  CHECK(y[1] == doctest::Approx(0.7));
  CHECK(y[2] == doctest::Approx(0.8));
  CHECK(y[3] == doctest::Approx(0.9));

  const auto u = marginal_probabilities(SelectionDistribution::uniform(3, 2));
  for (double v : u) CHECK(v == doctest::Approx(2.0 / 3.0));

  for (double v : marginal_probabilities(SelectionDistribution::uniform(5, 5))) CHECK(v == 1.0);
}

TEST_CASE("marginals sum to alpha for random distributions") {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int theta = 1 + static_cast<int>(rng() % 7);
    const int alpha = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(theta));
    const auto p = sample_simplex(static_cast<int>(binomial(theta, alpha)), rng);
    const SelectionDistribution d(theta, alpha, p);
    double total = 0.0;
    for (double v : marginal_probabilities(d)) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
      total += v;
    }
    CHECK(total == doctest::Approx(alpha).epsilon(1e-9));
  }
}

TEST_CASE("distribution construction normalizes near-one totals and rejects others") {
  const SelectionDistribution d(3, 2, {0.5, 0.3, 0.2 + 5e-10});
  double total = 0.0;
  for (double p : d.probs()) total += p;
  CHECK(std::abs(total - 1.0) < 1e-12);
  CHECK_THROWS_AS(SelectionDistribution(3, 2, {0.5, 0.3, 0.3}), Error);
  CHECK_THROWS_AS(SelectionDistribution(3, 2, {0.5, 0.5}), Error);
  CHECK_THROWS_AS(SelectionDistribution(3, 2, {1.2, -0.1, -0.1}), Error);
}

TEST_CASE("from_pairs requires every subset exactly once") {
  const auto d = SelectionDistribution::from_pairs(3, 2, {{{2, 3}, 0.15}, {{1, 2}, 0.6}, {{1, 3}, 0.25}});
  CHECK(d.probability({1, 2}) == doctest::Approx(0.6));
  CHECK(d.probability({2, 3}) == doctest::Approx(0.15));
  CHECK_THROWS_AS(SelectionDistribution::from_pairs(3, 2, {{{1, 2}, 0.6}, {{1, 3}, 0.4}}), Error);
  CHECK_THROWS_AS(
      SelectionDistribution::from_pairs(3, 2, {{{1, 2}, 0.5}, {{1, 2}, 0.2}, {{1, 3}, 0.2}, {{2, 3}, 0.1}}), Error);
  CHECK_THROWS_AS(SelectionDistribution::from_pairs(3, 2, {{{1, 4}, 0.5}, {{1, 3}, 0.2}, {{2, 3}, 0.3}}), Error);
}

TEST_CASE("exclusion indexing maps the subset missing rank i to Y_{theta-i+1}") {
  const auto d = SelectionDistribution::from_pairs(3, 2, {{{1, 2}, 0.6}, {{1, 3}, 0.25}, {{2, 3}, 0.15}});
  const auto y = to_exclusion_Y(d);
  CHECK(y.at(3) == doctest::Approx(0.15));
  CHECK(y.at(1) == doctest::Approx(0.6));
  CHECK(y.at(2) == doctest::Approx(0.25));

  const auto d2 = SelectionDistribution::from_pairs(2, 1, {{{2}, 0.3}, {{1}, 0.7}});
  const auto y2 = to_exclusion_Y(d2);
  CHECK(y2.at(2) == doctest::Approx(0.3));
  CHECK(y2.at(1) == doctest::Approx(0.7));

  try {
    to_exclusion_Y(SelectionDistribution::uniform(4, 2));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kMode);
  }
}

TEST_CASE("exclusion indexing round-trips and matches 1 - marginal") {
  SplitMix64 rng(5);
  for (int theta = 2; theta <= 8; ++theta) {
    const ExclusionY y(sample_simplex(theta, rng));
    const auto d = from_exclusion_Y(y);
    const auto back = to_exclusion_Y(d);
    for (int i = 1; i <= theta; ++i) CHECK(back.at(i) == doctest::Approx(y.at(i)).epsilon(1e-15));
    const auto m = marginal_probabilities(d);
    for (int i = 1; i <= theta; ++i) {
      CHECK(m[static_cast<std::size_t>(i - 1)] == doctest::Approx(1.0 - y.at(theta - i + 1)).epsilon(1e-12));
    }
  }
}

TEST_CASE("ExclusionY ordering and bounds flags") {
  const ExclusionY a({0.6, 0.25, 0.15});
  CHECK(a.ordered());
  CHECK(a.within_bounds());
  CHECK(a.head_sum() == doctest::Approx(0.6));
  const ExclusionY b({0.25, 0.6, 0.15});
  CHECK_FALSE(b.ordered());
  const ExclusionY c({0.3, 0.3, 0.4});
  CHECK_FALSE(c.within_bounds());
  CHECK_THROWS_AS(ExclusionY({0.5, 0.6}), Error);
  CHECK_THROWS_AS(ExclusionY({1.0}), Error);
}

TEST_CASE("sample_subset follows the distribution") {
  SplitMix64 rng(3);
  const auto point = SelectionDistribution::point_mass(3, {1, 2});
  for (int i = 0; i < 100; ++i) CHECK(sample_subset(point, rng) == Subset{1, 2});

  const auto uniform = SelectionDistribution::uniform(3, 2);
  std::map<Subset, int> counts;
  const int n = 30'000;
  for (int i = 0; i < n; ++i) ++counts[sample_subset(uniform, rng)];
  double chi2 = 0.0;
  for (const auto& [s, c] : counts) {
    CHECK(std::abs(c / static_cast<double>(n) - 1.0 / 3.0) < 0.02);
    const double e = n / 3.0;
    chi2 += (c - e) * (c - e) / e;
  }
  CHECK(chi2 < 13.8);  // chi-square, 2 dof, p = 0.001
}

TEST_CASE("sampling is deterministic for a seed") {
  const auto d = SelectionDistribution(4, 3, {0.1, 0.2, 0.3, 0.4});
  SplitMix64 a(99);
  SplitMix64 b(99);
  for (int i = 0; i < 1000; ++i) CHECK(sample_subset_index(d, a) == sample_subset_index(d, b));
}

TEST_CASE("sample_simplex is uniform on the simplex") {
  SplitMix64 rng(8);
  CHECK(sample_simplex(1, rng) == std::vector<double>{1.0});
  std::vector<double> mean(4, 0.0);
  const int n = 100'000;
  for (int i = 0; i < n; ++i) {
    const auto p = sample_simplex(4, rng);
    double total = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
      CHECK_FALSE(p[k] < 0.0);
      total += p[k];
      mean[k] += p[k] / n;
    }
    REQUIRE(std::abs(total - 1.0) < kSimplexTolerance);
  }
  for (double m : mean) CHECK(std::abs(m - 0.25) < 0.01);
  for (int i = 0; i < 1000; ++i) {
    for (double v : sample_simplex(3, rng)) CHECK(v >= 0.0);
  }
}

TEST_CASE("normalized uniform sampler stays on the simplex") {
  SplitMix64 rng(2);
  for (int i = 0; i < 1000; ++i) {
    const auto p = sample_normalized_uniform(5, rng);
    double total = 0.0;
    for (double v : p) {
      CHECK(v >= 0.0);
      total += v;
    }
    CHECK(std::abs(total - 1.0) < 1e-12);
  }
}
