#pragma once

#include <cstdint>

namespace godist {

// Counter-based deterministic PRNG (splitmix64). The state advances by the
// 64-bit golden-ratio constant and each output is a bijective mix of the
// counter, so independent streams never share sequences and results are
// identical on every platform. std::uniform_*_distribution is deliberately
// avoided: its output is not pinned by the standard.
class SplitMix64 {
 public:
  static constexpr uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  static constexpr uint64_t mix(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  uint64_t next() {
    state_ += kGoldenGamma;
    return mix(state_);
  }

  // Unbiased integer in [0, bound) by rejection.
  uint64_t next_below(uint64_t bound) {
    const uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  // 53-bit uniform in [0, 1).
  double next_real01() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  uint64_t state() const { return state_; }

 private:
  uint64_t state_;
};

// Stream-splitting rule shared by every parallel/indexed consumer:
// stream i of master seed s starts from  s XOR mix((i + 1) * gamma).
// Fixed here once so corpora, bootstrap iterations, and any reimplementation
// agree on the exact random sequences.
inline SplitMix64 derive_stream(uint64_t seed, uint64_t index) {
  return SplitMix64(seed ^ SplitMix64::mix((index + 1) * SplitMix64::kGoldenGamma));
}

}  // namespace godist
