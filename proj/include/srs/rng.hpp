#pragma once

#include <cstdint>

namespace srs {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based stream: draw k is mix64(key_hash + (k + 1) * golden gamma),
/// i.e. SplitMix64 whose state is a pure function of (key, k). Any draw can
/// be recomputed without replaying the stream.
class CounterRng {
 public:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  explicit CounterRng(std::uint64_t key) : base_(mix64(key)) {}

  /// Stream of trajectory `index` under `master_seed`:
  /// key = mix64(seed) XOR index. Hashing the seed first keeps nearby
  /// master seeds from producing permutations of the same stream set.
  static CounterRng for_trajectory(std::uint64_t master_seed,
                                   std::uint64_t index) {
    return CounterRng(mix64(master_seed) ^ index);
  }

  std::uint64_t at(std::uint64_t counter) const {
    return mix64(base_ + (counter + 1) * kGamma);
  }

  std::uint64_t next() { return at(counter_++); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  std::uint64_t draws() const { return counter_; }

 private:
  std::uint64_t base_;
  std::uint64_t counter_ = 0;
};

}  // namespace srs
