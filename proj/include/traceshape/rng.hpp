#pragma once

#include <cstdint>
#include <random>

namespace traceshape {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-derived substream: stream `index` of `master` is independent of
/// how many other streams exist, so per-sensor draws do not depend on n_s or
/// on scheduling.
inline std::mt19937_64 substream(std::uint64_t master, std::uint64_t index) {
  return std::mt19937_64(splitmix64(master ^ splitmix64(index + 0x51ed2701ULL)));
}

}  // namespace traceshape
