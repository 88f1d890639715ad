#ifndef LOCS_RNG_HPP
#define LOCS_RNG_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

namespace locs {

// SplitMix64 mixing step; used to derive independent sub-seeds so that
// every sample index owns its own RNG stream. Results are identical no
// matter how work is split across threads.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t sub_seed(std::uint64_t seed,
                              std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = mix64(seed);
  for (std::uint64_t p : path) {
    s = mix64(s ^ mix64(p));
  }
  return s;
}

inline std::mt19937_64 rng_stream(std::uint64_t seed,
                                  std::initializer_list<std::uint64_t> path) {
  return std::mt19937_64(sub_seed(seed, path));
}

// Stream domains, so that e.g. surface samples and probe points drawn from
// the same (seed, step) never collide.
enum : std::uint64_t {
  kDomainSurface = 0x5351,
  kDomainProbe = 0x5052,
  kDomainPlanner = 0x504c,
};

}  // namespace locs

#endif
