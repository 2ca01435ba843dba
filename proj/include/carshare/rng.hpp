#pragma once

#include <cstdint>

namespace carshare {

// SplitMix64 (Steele, Lea, Flood 2014). The instance generators depend on this
// exact recurrence so that files are reproducible across implementations.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Integer in [lo, hi] as lo + next() mod (hi - lo + 1).
  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(next() % span);
  }

  // UniformRandomBitGenerator interface so the stream can feed <random>.
  std::uint64_t operator()() { return next(); }
  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~std::uint64_t{0}; }

 private:
  std::uint64_t state_;
};

/// Stateless mix of a single value; used for set fingerprints.
inline std::uint64_t mix64(std::uint64_t x) {
  SplitMix64 g(x);
  return g.next();
}

}  // namespace carshare
