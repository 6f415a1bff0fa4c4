#pragma once

// Counter-based pseudo-random streams.  Every draw of a batch owns a
// substream keyed by (seed, draw index), so batches are bit-reproducible
// regardless of how many variates a rejection sampler consumes and of any
// parallel scheduling of draws.

#include <cstdint>

namespace selfdecomp {
namespace rng {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// SplitMix64 output function (Steele, Lea, Flood 2014).
inline std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  x ^= x >> 31;
  return x;
}

class DrawStream {
 public:
  DrawStream(std::uint64_t seed, std::uint64_t index)
      : key_(mix64(mix64(seed + kGolden) ^ (index * 0xBF58476D1CE4E5B9ull + 0x94D049BB133111EBull))) {}

  std::uint64_t next_u64() { return mix64(key_ + (++counter_) * kGolden); }

  // uniform on the open interval (0, 1)
  double next_unit() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace rng
}  // namespace selfdecomp
