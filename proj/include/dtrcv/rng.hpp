#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "dtrcv/stats.hpp"

namespace dtrcv {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Folds tags into a seed so that every (seed, tag...) combination names its
// own independent stream. Replicates, splits, halvings, and candidate fits all
// derive their generators this way; nothing ever shares a stream, which is
// what makes concurrent schedules reproduce sequential results bit for bit.
template <class... Tags>
constexpr std::uint64_t derive_seed(std::uint64_t seed, Tags... tags) {
  ((seed = splitmix64(seed ^ static_cast<std::uint64_t>(tags))), ...);
  return splitmix64(seed);
}

// Deterministic generator: the engine is fully specified by the standard and
// every transform below is written out explicitly, so identical seeds give
// identical draws on any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(splitmix64(seed ^ 0x6a09e667f3bcc909ULL)) {}

  // Uniform draw strictly inside (0,1).
  double uniform01() {
    const std::uint64_t bits = eng_() >> 11;  // 53 random bits
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  }

  // Standard normal through the inverse CDF; shares one code path with the
  // truncated sampler.
  double normal() { return norm_quantile(uniform01()); }

  double normal(double mu, double sigma) { return mu + sigma * normal(); }

  bool bernoulli(double p) { return uniform01() < p; }

  // Unbiased integer in [0, n).
  std::uint64_t bounded(std::uint64_t n) {
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - max % n;
    std::uint64_t x;
    do {
      x = eng_();
    } while (x >= limit);
    return x % n;
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t k = static_cast<std::size_t>(bounded(i));
      std::swap(v[i - 1], v[k]);
    }
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace dtrcv
