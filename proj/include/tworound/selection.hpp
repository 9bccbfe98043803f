#pragma once

// First-round selection: which alpha of the top-theta first-round positions
// advance to the second round, and with what probability.

#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "tworound/errors.hpp"
#include "tworound/rng.hpp"

namespace tworound {

/// Sorted, 1-based first-round positions.
using Subset = std::vector<int>;

constexpr int kMaxTheta = 20;
constexpr double kSimplexTolerance = 1e-12;
constexpr double kNormalizeTolerance = 1e-9;

std::uint64_t binomial(int n, int k);

/// All alpha-subsets of {1..theta} in lexicographic order.
std::vector<Subset> enumerate_subsets(int theta, int alpha);

std::uint32_t subset_mask(const Subset& subset);

class SelectionDistribution {
 public:
  /// `probs` is aligned with `enumerate_subsets(theta, alpha)`. A total within
  /// 1e-9 of one is renormalized; anything further off is rejected.
  SelectionDistribution(int theta, int alpha, std::vector<double> probs);

  static SelectionDistribution from_pairs(int theta, int alpha,
                                          const std::vector<std::pair<Subset, double>>& pairs);
  static SelectionDistribution uniform(int theta, int alpha);
  static SelectionDistribution point_mass(int theta, const Subset& subset);

  int theta() const noexcept { return theta_; }
  int alpha() const noexcept { return alpha_; }
  std::size_t size() const noexcept { return probs_.size(); }

  std::span<const double> probs() const noexcept { return probs_; }
  const std::vector<Subset>& subsets() const noexcept { return subsets_; }
  std::span<const std::uint32_t> masks() const noexcept { return masks_; }

  double probability(const Subset& subset) const;
  std::size_t index_of(const Subset& subset) const;

 private:
  int theta_;
  int alpha_;
  std::vector<Subset> subsets_;
  std::vector<std::uint32_t> masks_;
  std::vector<double> probs_;
};

/// y_i: probability that first-round position i advances. Sums to alpha.
std::vector<double> marginal_probabilities(const SelectionDistribution& dist);

/// Selection probabilities for alpha = theta - 1, indexed by the excluded
/// position: Y_{theta-i+1} is the probability of the subset that leaves out
/// first-round position i.
class ExclusionY {
 public:
  explicit ExclusionY(std::vector<double> values);

  int theta() const noexcept { return static_cast<int>(values_.size()); }
  std::span<const double> values() const noexcept { return values_; }

  /// 1-based access, Y_1 .. Y_theta.
  double at(int i) const { return values_.at(static_cast<std::size_t>(i - 1)); }

  /// Sum of Y_1 .. Y_{theta-2}.
  double head_sum() const noexcept;
  /// Y_{theta-1}.
  double second_last() const noexcept { return values_[values_.size() - 2]; }
  /// Y_theta.
  double last() const noexcept { return values_.back(); }

  /// Y_i > Y_{theta-1} > Y_theta for every i <= theta-2.
  bool ordered() const noexcept;
  /// Y_{theta-1} < 1/(theta-1) and Y_theta < 1/theta.
  bool within_bounds() const noexcept;

 private:
  std::vector<double> values_;
};

ExclusionY to_exclusion_Y(const SelectionDistribution& dist);
SelectionDistribution from_exclusion_Y(const ExclusionY& y);

/// Inverse-CDF draw; returns the index into `dist.subsets()`.
template <class Rng>
std::size_t sample_subset_index(const SelectionDistribution& dist, Rng& rng) {
  const double u = rng.uniform();
  const auto probs = dist.probs();
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    if (probs[k] <= 0.0) continue;
    last_positive = k;
    acc += probs[k];
    if (u < acc) return k;
  }
  return last_positive;
}

template <class Rng>
const Subset& sample_subset(const SelectionDistribution& dist, Rng& rng) {
  return dist.subsets()[sample_subset_index(dist, rng)];
}

/// Uniform point on the (k-1)-simplex via normalized unit exponentials.
template <class Rng>
std::vector<double> sample_simplex(int k, Rng& rng) {
  if (k < 1) raise(ErrorKind::kInvalidArgument, "sample_simplex: k must be >= 1");
  std::vector<double> out(static_cast<std::size_t>(k));
  if (k == 1) {
    out[0] = 1.0;
    return out;
  }
  double total = 0.0;
  for (auto& e : out) {
    e = -std::log1p(-rng.uniform());
    total += e;
  }
  for (auto& e : out) e /= total;
  return out;
}

/// Independent U(0,1) entries divided by their sum. Not uniform on the
/// simplex; this is the sampler the published revenue tables correspond to.
template <class Rng>
std::vector<double> sample_normalized_uniform(int k, Rng& rng) {
  if (k < 1) raise(ErrorKind::kInvalidArgument, "sample_normalized_uniform: k must be >= 1");
  std::vector<double> out(static_cast<std::size_t>(k));
  double total = 0.0;
  for (auto& e : out) {
    e = rng.uniform();
    total += e;
  }
  if (total <= 0.0) {
    for (auto& e : out) e = 1.0 / k;
    return out;
  }
  for (auto& e : out) e /= total;
  return out;
}

}  // namespace tworound
