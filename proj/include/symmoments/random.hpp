#pragma once

#include <cstdint>
#include <optional>
#include <random>

namespace symmoments {

/// Seeded, splittable source of uniforms. A (seed, stream index) pair always
/// yields the same sequence, and distinct indices give independent substreams.
///
/// All transforms are implemented here rather than through <random>
/// distributions so that draws are identical across standard libraries.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream_index = 0);

  /// Uniform on the open interval (0, 1).
  double uniform();
  /// +1 or -1 with equal probability.
  double sign();
  /// Standard normal via Box–Muller.
  double normal();
  std::uint64_t bits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_normal_;
};

/// Mixes a list of integers into one 64-bit seed (splitmix64 finaliser).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

}  // namespace symmoments
