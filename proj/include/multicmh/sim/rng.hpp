#pragma once

#include <cmath>
#include <cstdint>

namespace multicmh::sim {

/// Counter-based 64-bit generator (splitmix64 output function). The i-th
/// output is a pure function of (key, i), so replications can be given
/// independent streams and results do not depend on scheduling.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(mix(key ^ 0x6a09e667f3bcc909ull)) {}

  /// Independent stream for one replication: stream id is folded into the key.
  static CounterRng stream(std::uint64_t seed, std::uint64_t stream_id) {
    return CounterRng(mix(seed) ^ mix(stream_id * 0x9e3779b97f4a7c15ull + 0xbf58476d1ce4e5b9ull));
  }

  std::uint64_t next_u64() {
    std::uint64_t z = key_ + (++counter_) * 0x9e3779b97f4a7c15ull;
    return mix(z);
  }

  /// Uniform on (0, 1]: 53-bit mantissa, never exactly 0.
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller, one spare cached.
  double next_normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = next_uniform();
    double u2 = next_uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  /// Uniform integer in [0, n), n >= 1. Rejection-free modulo bias is
  /// negligible for the n used here, but reject anyway to stay exact.
  std::uint64_t next_below(std::uint64_t n) {
    std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Fisher-Yates shuffle of [first, last) driven by CounterRng.
template <typename It>
void shuffle(It first, It last, CounterRng& rng) {
  auto n = static_cast<std::uint64_t>(last - first);
  for (std::uint64_t i = n; i > 1; --i) {
    std::uint64_t j = rng.next_below(i);
    std::swap(first[i - 1], first[j]);
  }
}

}  // namespace multicmh::sim
