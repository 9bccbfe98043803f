#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace tworound {

/// SplitMix64 bit generator. Small state makes it cheap to spin up one
/// independent stream per Monte Carlo draw, which keeps parallel results
/// independent of the worker count.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed = 0) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) using the top 53 bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

/// Derives a sub-stream seed from a base seed and a list of keys.
inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) noexcept {
  SplitMix64 mix(seed);
  std::uint64_t h = mix();
  for (std::uint64_t k : keys) {
    SplitMix64 step(h ^ (k * 0xd6e8feb86659fd93ULL));
    h = step();
  }
  return h;
}

}  // namespace tworound
