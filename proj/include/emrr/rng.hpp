#pragma once

#include <cstdint>
#include <limits>

namespace emrr {

/// SplitMix64. All randomness in generators and benches flows from one seed
/// through this so datasets and CSVs are reproducible across platforms.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [lo, hi]; modulo bias is irrelevant at our ranges.
  std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) {
    const std::uint64_t span = hi - lo + 1;
    return span == 0 ? (*this)() : lo + (*this)() % span;
  }

 private:
  std::uint64_t state_;
};

}  // namespace emrr
