#ifndef OIOBF_RNG_HPP
#define OIOBF_RNG_HPP

#include <cstdint>
#include <initializer_list>

namespace oiobf {

// Counter-based splittable generator (splitmix64). All randomized choices in
// this project go through this so results are identical across platforms and
// standard libraries.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Unbiased integer in [0, bound) via rejection.
  std::uint64_t bounded(std::uint64_t bound) {
    const std::uint64_t threshold = -bound % bound;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  // Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

// Order-sensitive combination of a seed with a list of tags; used to derive
// one independent stream per (side, level, node, mode, retry) work item.
inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
  SplitMix64 g(seed ^ 0x6a09e667f3bcc909ULL);
  std::uint64_t h = g.next();
  for (std::uint64_t t : tags) {
    SplitMix64 m(h ^ (t + 0x9e3779b97f4a7c15ULL));
    h = m.next();
  }
  return h;
}

}  // namespace oiobf

#endif
