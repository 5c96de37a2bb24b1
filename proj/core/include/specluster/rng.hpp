#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace specluster {

// Recorded in every output header so stochastic runs can be reproduced.
inline constexpr std::string_view kGeneratorName = "mt19937_64+box-muller";
inline constexpr int kGeneratorVersion = 1;

// SplitMix64 finalizer; a bijective 64-bit mix.
std::uint64_t mix64(std::uint64_t x) noexcept;

// Independent stream seed for sub-task `stream` of a run seeded with `master`.
// Used for per-column, per-block and per-restart seeds.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept;

// Seeded generator with portable uniform and normal variates. The engine
// (mt19937_64) is fully specified by the standard; the variate transforms are
// implemented here instead of relying on the implementation-defined
// std::*_distribution classes.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1].
  double uniform_open_zero() { return 1.0 - uniform(); }

  // Uniform integer in [0, bound), bound > 0. Unbiased (rejection sampling).
  std::uint64_t below(std::uint64_t bound);

  // Standard normal via the Box-Muller transform; pairs are cached.
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace specluster
