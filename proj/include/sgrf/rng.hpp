#pragma once

// Seedable, platform-independent noise source. The engine is std::mt19937_64,
// whose output sequence is fixed by the C++ standard; normals are produced by
// Box-Muller on 53-bit uniforms rather than std::normal_distribution, whose
// algorithm is implementation-defined.

#include <cstdint>
#include <random>
#include <string_view>

#include "sgrf/specfun.hpp"

namespace sgrf {

inline constexpr std::string_view kRngAlgorithm = "mt19937_64/splitmix64/box-muller";

/// SplitMix64 finalizer, used to spread (seed, stream) over the engine state.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

class Rng {
 public:
  /// Independent substream `stream` of `seed`; samples use stream = sample index.
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  /// Uniform on the open interval (0, 1).
  double uniform() noexcept;
  /// Standard normal N(0, 1).
  double normal() noexcept;

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// m > 0: x + iy with x, y independent N(0, 1/2); m = 0: real N(0, 1).
Complex draw_complex_std_normal(Rng& rng, int m) noexcept;

}  // namespace sgrf
