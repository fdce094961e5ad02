#pragma once

#include <cstdint>

namespace irslab {

/// Stream ids for counter-based seed derivation. Every randomized command
/// draws from derive_seed(seed, stream, counter) so that a sample's
/// randomness depends only on (seed, stream, counter), never on scheduling.
enum class Stream : std::uint64_t {
  GenerateHomomorphism = 1,
  Sweep = 2,
  ConstructSplice = 3,
  GenerateSpace = 4,
};

std::uint64_t splitmix64(std::uint64_t x);

std::uint64_t derive_seed(std::uint64_t seed, Stream stream, std::uint64_t counter);

/// SplitMix64 generator: output i is a fixed mix of (seed + i * golden).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();

  /// Uniform integer in [0, bound), bound > 0, by rejection.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::uint64_t state_;
};

}  // namespace irslab
