#pragma once

#include <cstdint>
#include <random>

namespace racsim {

// SplitMix64 finalizer. Used to spread seeds and derive substream keys.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Seedable uniform generator with key-derived independent substreams.
// Everything downstream of an Rng is deterministic given its seed, and
// substream(i) depends only on (seed, i), so batches can be partitioned
// across threads without changing the output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix64(seed)) {}

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform draw strictly inside (0,1); endpoints are never returned, so
  // log(u) and log(1-u) are always finite.
  double uniform01() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  Rng substream(std::uint64_t index) const {
    return Rng(mix64(seed_ ^ (0xD1B54A32D192ED03ULL * (index + 1))));
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace racsim
