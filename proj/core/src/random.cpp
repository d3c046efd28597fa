#include "rrtlab/random.hpp"

namespace rrtlab {

Rng::Rng(std::uint64_t seed) {
  SplitMix64 sm(seed);
  for (auto& word : s_) word = sm.next();
}

Rng Rng::for_stream(std::uint64_t master_seed, std::uint64_t index) {
  // Two rounds of mixing so that adjacent (seed, index) pairs land far apart.
  SplitMix64 outer(master_seed);
  const std::uint64_t key = outer.next();
  SplitMix64 inner(key ^ (index * 0xD1B54A32D192ED03ULL));
  return Rng(inner.next());
}

}  // namespace rrtlab
