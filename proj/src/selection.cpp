#include "tworound/selection.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>
#include <string>

namespace tworound {

namespace {

void check_theta_alpha(int theta, int alpha) {
  if (theta < 1 || theta > kMaxTheta) {
    raise(ErrorKind::kInvalidArgument, "theta must be in [1, 20], got " + std::to_string(theta));
  }
  if (alpha < 1 || alpha > theta) {
    raise(ErrorKind::kInvalidArgument, "alpha must be in [1, theta], got alpha=" +
                                           std::to_string(alpha) + " theta=" + std::to_string(theta));
  }
}

std::string subset_string(const Subset& s) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
  os << '}';
  return os.str();
}

}  // namespace

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

std::vector<Subset> enumerate_subsets(int theta, int alpha) {
  check_theta_alpha(theta, alpha);
  std::vector<Subset> out;
  out.reserve(binomial(theta, alpha));
  Subset cur(static_cast<std::size_t>(alpha));
  std::iota(cur.begin(), cur.end(), 1);
  while (true) {
    out.push_back(cur);
    int i = alpha - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == theta - alpha + i + 1) --i;
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < alpha; ++j) cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

std::uint32_t subset_mask(const Subset& subset) {
  std::uint32_t m = 0;
  for (int p : subset) m |= (1u << (p - 1));
  return m;
}

SelectionDistribution::SelectionDistribution(int theta, int alpha, std::vector<double> probs)
    : theta_(theta), alpha_(alpha), subsets_(enumerate_subsets(theta, alpha)), probs_(std::move(probs)) {
  if (probs_.size() != subsets_.size()) {
    raise(ErrorKind::kSchema, "selection distribution needs " + std::to_string(subsets_.size()) +
                                  " probabilities, got " + std::to_string(probs_.size()));
  }
  double total = 0.0;
  for (double p : probs_) {
    if (!std::isfinite(p) || p < 0.0 || p > 1.0 + kNormalizeTolerance) {
      raise(ErrorKind::kSchema, "selection probabilities must lie in [0,1]");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kNormalizeTolerance) {
    raise(ErrorKind::kSchema, "selection probabilities sum to " + std::to_string(total) + ", expected 1");
  }
  if (total != 1.0) {
    for (double& p : probs_) p /= total;
  }
  masks_.reserve(subsets_.size());
  for (const auto& s : subsets_) masks_.push_back(subset_mask(s));
}

SelectionDistribution SelectionDistribution::from_pairs(
    int theta, int alpha, const std::vector<std::pair<Subset, double>>& pairs) {
  const auto subsets = enumerate_subsets(theta, alpha);
  std::vector<double> probs(subsets.size(), 0.0);
  std::vector<bool> seen(subsets.size(), false);
  for (const auto& [subset, p] : pairs) {
    Subset sorted = subset;
    std::sort(sorted.begin(), sorted.end());
    if (static_cast<int>(sorted.size()) != alpha ||
        std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() ||
        sorted.front() < 1 || sorted.back() > theta) {
      raise(ErrorKind::kSchema, "subset " + subset_string(subset) + " is not an alpha-subset of {1..theta}");
    }
    const auto it = std::lower_bound(subsets.begin(), subsets.end(), sorted);
    const auto k = static_cast<std::size_t>(it - subsets.begin());
    if (seen[k]) raise(ErrorKind::kSchema, "duplicate subset " + subset_string(sorted));
    seen[k] = true;
    probs[k] = p;
  }
  for (std::size_t k = 0; k < seen.size(); ++k) {
    if (!seen[k]) raise(ErrorKind::kSchema, "missing subset " + subset_string(subsets[k]));
  }
  return SelectionDistribution(theta, alpha, std::move(probs));
}

SelectionDistribution SelectionDistribution::uniform(int theta, int alpha) {
  const auto count = binomial(theta, alpha);
  return SelectionDistribution(theta, alpha, std::vector<double>(count, 1.0 / static_cast<double>(count)));
}

SelectionDistribution SelectionDistribution::point_mass(int theta, const Subset& subset) {
  const int alpha = static_cast<int>(subset.size());
  const auto subsets = enumerate_subsets(theta, alpha);
  std::vector<std::pair<Subset, double>> pairs;
  pairs.reserve(subsets.size());
  for (const auto& s : subsets) pairs.emplace_back(s, s == subset ? 1.0 : 0.0);
  return from_pairs(theta, alpha, pairs);
}

std::size_t SelectionDistribution::index_of(const Subset& subset) const {
  const auto it = std::lower_bound(subsets_.begin(), subsets_.end(), subset);
  if (it == subsets_.end() || *it != subset) {
    raise(ErrorKind::kInvalidArgument, "unknown subset " + subset_string(subset));
  }
  return static_cast<std::size_t>(it - subsets_.begin());
}

double SelectionDistribution::probability(const Subset& subset) const { return probs_[index_of(subset)]; }

std::vector<double> marginal_probabilities(const SelectionDistribution& dist) {
  std::vector<double> y(static_cast<std::size_t>(dist.theta()), 0.0);
  const auto& subsets = dist.subsets();
  const auto probs = dist.probs();
  for (std::size_t k = 0; k < subsets.size(); ++k) {
    for (int p : subsets[k]) y[static_cast<std::size_t>(p - 1)] += probs[k];
  }
  for (double& v : y) v = std::clamp(v, 0.0, 1.0);
  return y;
}

ExclusionY::ExclusionY(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 2) raise(ErrorKind::kInvalidArgument, "exclusion Y needs theta >= 2 entries");
  double total = 0.0;
  for (double v : values_) {
    if (!std::isfinite(v) || v < 0.0) raise(ErrorKind::kSchema, "Y entries must be nonnegative");
    total += v;
  }
  if (std::abs(total - 1.0) > kNormalizeTolerance) {
    raise(ErrorKind::kSchema, "Y entries sum to " + std::to_string(total) + ", expected 1");
  }
  if (total != 1.0) {
    for (double& v : values_) v /= total;
  }
}

double ExclusionY::head_sum() const noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i + 2 < values_.size(); ++i) s += values_[i];
  return s;
}

bool ExclusionY::ordered() const noexcept {
  const double a = second_last();
  const double b = last();
  if (!(a > b)) return false;
  for (std::size_t i = 0; i + 2 < values_.size(); ++i) {
    if (!(values_[i] > a)) return false;
  }
  return true;
}

bool ExclusionY::within_bounds() const noexcept {
  const double t = static_cast<double>(theta());
  return second_last() < 1.0 / (t - 1.0) && last() < 1.0 / t;
}

ExclusionY to_exclusion_Y(const SelectionDistribution& dist) {
  const int theta = dist.theta();
  if (dist.alpha() != theta - 1) {
    raise(ErrorKind::kMode, "exclusion indexing needs alpha = theta - 1, got alpha=" +
                                std::to_string(dist.alpha()) + " theta=" + std::to_string(theta));
  }
  std::vector<double> y(static_cast<std::size_t>(theta), 0.0);
  const std::uint32_t full = (1u << theta) - 1u;
  const auto masks = dist.masks();
  const auto probs = dist.probs();
  for (std::size_t k = 0; k < masks.size(); ++k) {
    const std::uint32_t missing = full & ~masks[k];
    const int rank = std::countr_zero(missing) + 1;
    y[static_cast<std::size_t>(theta - rank)] = probs[k];
  }
  return ExclusionY(std::move(y));
}

SelectionDistribution from_exclusion_Y(const ExclusionY& y) {
  const int theta = y.theta();
  const auto subsets = enumerate_subsets(theta, theta - 1);
  std::vector<double> probs(subsets.size());
  for (std::size_t k = 0; k < subsets.size(); ++k) {
    int rank = theta;
    for (int i = 0; i < theta - 1; ++i) {
      if (subsets[k][static_cast<std::size_t>(i)] != i + 1) {
        rank = i + 1;
        break;
      }
    }
    probs[k] = y.at(theta - rank + 1);
  }
  return SelectionDistribution(theta, theta - 1, std::move(probs));
}

}  // namespace tworound
