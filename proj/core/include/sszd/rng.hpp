#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace sszd {

/// Seedable random source. Child streams are derived from the seed and a
/// stream id only, so split() does not depend on how many draws were made.
class Rng {
 public:
  using Engine = std::mt19937_64;

  explicit Rng(std::uint64_t seed = 0);

  std::uint64_t seed() const noexcept { return seed_; }
  Rng split(std::uint64_t stream) const;

  double normal();
  double uniform();
  /// Uniform integer in [lo, hi].
  std::size_t uniform_index(std::size_t lo, std::size_t hi);
  /// +1 or -1 with probability 1/2 each.
  double sign();

  Engine& engine() noexcept { return engine_; }

 private:
  std::uint64_t seed_;
  Engine engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// SplitMix64 finalizer; used to derive stream seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

}  // namespace sszd
