#pragma once

#include <cstdint>
#include <vector>

namespace mtdbench {

// xoshiro256** 1.0 (Blackman & Vigna public-domain constants), seeded from a
// single 64-bit value through splitmix64. All seeded behaviour in the library
// (random VM selection, scenario generation) routes through this generator so
// a seed reproduces byte-identical results across platforms and toolchains.
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) {
      x += 0x9e3779b97f4a7c15ULL;
      std::uint64_t z = x;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      word = z ^ (z >> 31);
    }
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform integer in [0, bound). Plain modulo reduction: the tiny bias is
  // irrelevant here and the arithmetic is identical everywhere.
  std::uint64_t below(std::uint64_t bound) { return next() % bound; }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  static std::uint64_t rotl(std::uint64_t v, int k) {
    return (v << k) | (v >> (64 - k));
  }

  std::uint64_t state_[4];
};

// Partial Fisher-Yates: draws m distinct elements from `pool` (order of the
// draw is part of the contract, so callers get the same selection for the
// same seed regardless of how they use the result).
template <typename T>
std::vector<T> sample_without_replacement(std::vector<T> pool, std::size_t m,
                                          Xoshiro256& rng) {
  for (std::size_t i = 0; i < m && i + 1 < pool.size(); ++i) {
    const std::size_t j = i + static_cast<std::size_t>(
                                  rng.below(static_cast<std::uint64_t>(pool.size() - i)));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(m);
  return pool;
}

}  // namespace mtdbench
