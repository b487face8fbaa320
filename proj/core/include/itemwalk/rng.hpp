#pragma once

#include <cstdint>

namespace itemwalk {

inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Mixes a base seed with up to two stream identifiers into one 64-bit seed.
// Used to give every (node, walk) task and every training worker its own
// reproducible stream independent of scheduling.
inline uint64_t mix_seed(uint64_t seed, uint64_t a = 0, uint64_t b = 0) {
  uint64_t s = seed;
  uint64_t h = splitmix64(s);
  s ^= a + 0x9e3779b97f4a7c15ull;
  h ^= splitmix64(s);
  s ^= b + 0xbf58476d1ce4e5b9ull;
  h ^= splitmix64(s);
  return h;
}

// xoshiro256**, seeded via splitmix64. Self-contained so that sampled values
// are identical across platforms and standard library versions.
class Rng {
 public:
  explicit Rng(uint64_t seed) {
    for (auto& w : state_) w = splitmix64(seed);
  }

  uint64_t next() {
    const uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, 1) with 53 bits of precision.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n). n must be > 0.
  uint64_t below(uint64_t n) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(next()) * n) >> 64);
  }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  uint64_t state_[4];
};

}  // namespace itemwalk
