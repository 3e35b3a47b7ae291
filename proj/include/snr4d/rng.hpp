#pragma once

#include <cstdint>
#include <random>

namespace snr4d {

// Stream ids for deriving independent generators from one master seed.
// Draws per stream are fixed by construction (symbols depend only on the
// master seed; ASE depends on master seed and span index), so toggling
// nonlinearity or halving the spatial step never shifts the noise draws —
// common-random-number comparisons across configurations stay aligned.
enum class RngStreamId : std::uint64_t {
  symbols = 1,
  ase = 2,
  metrics = 3,
};

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, RngStreamId stream, std::uint64_t index = 0) {
  std::uint64_t h = splitmix64(master ^ 0x6a09e667f3bcc908ull);
  h = splitmix64(h ^ static_cast<std::uint64_t>(stream));
  h = splitmix64(h ^ index);
  return h;
}

inline std::mt19937_64 make_generator(std::uint64_t master, RngStreamId stream,
                                      std::uint64_t index = 0) {
  return std::mt19937_64(derive_seed(master, stream, index));
}

// Unbiased-enough uniform index in [0, m) via 64x64 multiply-high; avoids
// std::uniform_int_distribution's library-dependent draw pattern.
inline std::uint32_t uniform_index(std::mt19937_64& gen, std::uint32_t m) {
  const unsigned __int128 wide = static_cast<unsigned __int128>(gen()) * m;
  return static_cast<std::uint32_t>(wide >> 64);
}

}  // namespace snr4d
