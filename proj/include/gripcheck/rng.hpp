// Seeded 64-bit generator (splitmix64) with documented stream splitting:
// trial k of a campaign draws from derive_stream(campaign_seed, k), so adding
// scenarios never perturbs the draws of existing trials.
#pragma once

#include <cstdint>

namespace gripcheck {

struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 bits of resolution.
  double next_unit() { return double(next() >> 11) * 0x1.0p-53; }
};

inline std::uint64_t derive_stream(std::uint64_t campaign_seed, std::uint64_t stream_index) {
  SplitMix64 g(campaign_seed ^ (0xA0761D6478BD642FULL * (stream_index + 1)));
  return g.next();
}

}  // namespace gripcheck
