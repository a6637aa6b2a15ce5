#pragma once

#include <cstdint>
#include <random>

namespace dynconn {

// splitmix64; used to derive independent sub-seeds from one master seed so
// that every consumer (workload, per-level repair sampling, per-rebuild
// decomposition) is deterministic under --seed regardless of scheduling.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
  return mix_seed(master ^ mix_seed(a ^ mix_seed(b)));
}

using Rng = std::mt19937_64;

inline std::uint64_t rand_below(Rng& rng, std::uint64_t n) {
  return n == 0 ? 0 : std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng);
}

}  // namespace dynconn
