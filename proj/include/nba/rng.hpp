#pragma once

#include <cstdint>

namespace nba {

// SplitMix64 (Steele, Lea & Flood 2014), used as a counter-based stream:
// output(i) = mix(seed + i * GAMMA). The same (seed, counter) pair yields the
// same value on every platform, which is what makes generated instances
// byte-identical across runs and implementations. Streams are split by
// hashing a label into a fresh seed.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Unbiased uniform draw from [0, bound) via rejection.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) return 0;
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v;
    do {
      v = next();
    } while (v >= limit);
    return v % bound;
  }

  // Inclusive integer range.
  long long range(long long lo, long long hi) {
    if (hi <= lo) return lo;
    return lo + static_cast<long long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  bool chance(std::uint64_t num, std::uint64_t den) { return below(den) < num; }

  // Derives an independent substream for a labeled purpose.
  SplitMix64 split(std::uint64_t label) {
    SplitMix64 mixer(state_ ^ (label * 0xD1B54A32D192ED03ULL));
    return SplitMix64(mixer.next());
  }

 private:
  std::uint64_t state_;
};

}  // namespace nba
