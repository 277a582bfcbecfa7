#pragma once

#include <cstdint>
#include <random>

#include "mrwspec/types.hpp"

namespace mrwspec {

// splitmix64 step; used only to spread seeds, never as the sampling engine.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Independent per-stream seed from a master seed and a stream counter.
// Streams with distinct counters yield unrelated engine states, so ensembles
// can be drawn in any order or in parallel without changing the result.
inline Seed derive_seed(Seed master, std::uint64_t stream) {
  std::uint64_t s = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
  const std::uint64_t a = splitmix64(s);
  return splitmix64(s) ^ (a << 1);
}

inline std::mt19937_64 make_engine(Seed seed) { return std::mt19937_64(seed); }

}  // namespace mrwspec
