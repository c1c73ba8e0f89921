#pragma once

#include <cstdint>
#include <random>

namespace pq {

inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Deterministic rng; (seed, stream) pairs give independent substreams.
inline std::mt19937_64 make_rng(uint64_t seed, uint64_t stream = 0) {
  uint64_t s = seed;
  uint64_t a = splitmix64(s);
  s ^= stream * 0xd1342543de82ef95ull + 0x2545f4914f6cdd1dull;
  uint64_t b = splitmix64(s);
  std::seed_seq seq{static_cast<uint32_t>(a), static_cast<uint32_t>(a >> 32),
                    static_cast<uint32_t>(b), static_cast<uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

inline uint64_t rand_u64(std::mt19937_64& rng) { return rng(); }

// Uniform in [0, bound) for bound a power of two.
inline uint64_t rand_below_pow2(std::mt19937_64& rng, uint64_t bound) {
  return rng() & (bound - 1);
}

inline bool rand_bit(std::mt19937_64& rng) { return (rng() >> 63) != 0; }

// Uniform double in (0, 1]; never returns 0 so log() is safe.
inline double rand_unit(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 1.0) * 0x1p-53;
}

}  // namespace pq
