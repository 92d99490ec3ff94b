#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>
#include <vector>

namespace cooccur::rng {

// All randomness in this toolkit flows through SplitMix64 (Steele, Lea &
// Flood, "Fast splittable pseudorandom number generators", OOPSLA 2014).
// The algorithm is pinned here so that independent implementations can
// reproduce every shuffle, resample, and noise draw bit for bit:
//
//   state' = state + 0x9E3779B97F4A7C15
//   z = state'
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   output = z ^ (z >> 31)
//
// Child streams: derive(seed, i) equals the (i+1)-th output of a SplitMix64
// generator seeded with `seed`; tagged derivation hashes the tag with
// FNV-1a 64 first. Bounded integers use modulo with rejection of the
// low bias region; uniform doubles take the top 53 bits; gaussians use the
// one-value Box-Muller form sqrt(-2 ln(1-u1)) * cos(2 pi u2).

inline constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline uint64_t mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

// Child seed for stream `index` of a parent seed; independent of the order
// in which streams are consumed.
inline uint64_t derive(uint64_t seed, uint64_t index) {
  return mix64(seed + kGolden * (index + 1));
}

inline uint64_t derive(uint64_t seed, std::string_view tag) {
  return derive(seed, fnv1a64(tag));
}

class SplitMix64 {
public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    state_ += kGolden;
    return mix64(state_);
  }

  // Uniform in [0, n). Unbiased: values below 2^64 mod n are redrawn.
  uint64_t bounded(uint64_t n) {
    const uint64_t threshold = (0 - n) % n;
    for (;;) {
      const uint64_t x = next();
      if (x >= threshold) return x % n;
    }
  }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Standard normal draw; consumes exactly two outputs.
  double gaussian() {
    const double u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(1.0 - u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

private:
  uint64_t state_;
};

// In-place Fisher-Yates: for i from n-1 down to 1, swap a[i] with
// a[gen.bounded(i+1)].
template <typename T>
void shuffle(std::vector<T>& items, SplitMix64& gen) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(gen.bounded(i));
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

}  // namespace cooccur::rng
