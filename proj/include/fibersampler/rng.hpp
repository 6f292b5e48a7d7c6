#pragma once

#include <cstdint>
#include <random>

namespace fibersampler {

__extension__ using Uint128 = unsigned __int128;

// Random source for every chain and every randomized tool.
//
// The engine is std::mt19937_64 seeded with a single 64-bit value, whose
// output sequence is fixed by the C++ standard. Conversions are done here
// rather than through <random> distributions, whose algorithms are left to
// the library vendor:
//
//   uniform01()  = (next() >> 11) * 2^-53, in [0, 1)
//   bounded(n)   = Lemire's multiply-shift with rejection, in [0, n)
//
// Parallel chain c (0-based) is seeded with the (c+1)-th output of
// SplitMix64 started at the master seed; see stream_seed().
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  std::uint64_t bounded(std::uint64_t n) {
    std::uint64_t x = next();
    Uint128 m = static_cast<Uint128>(x) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        x = next();
        m = static_cast<Uint128>(x) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

 private:
  std::mt19937_64 engine_;
};

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t state = master;
  std::uint64_t out = 0;
  for (std::uint64_t s = 0; s <= stream; ++s) out = splitmix64(state);
  return out;
}

}  // namespace fibersampler
