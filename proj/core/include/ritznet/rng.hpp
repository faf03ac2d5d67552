#pragma once

#include <cstdint>
#include <cmath>

namespace ritznet {

/// Counter-based 64-bit generator (splitmix64 finalizer over a keyed
/// counter). Streams derived from the same seed are independent, and a
/// generator is fully determined by (seed, stream, counter), so parallel
/// sweep cells can draw reproducible values without sharing state.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : state_(mix(seed ^ mix(stream * 0x9E3779B97F4A7C15ULL + 0x1ULL))) {}

  /// Child generator with an independent stream, e.g. one per sweep cell.
  Rng split(std::uint64_t stream) const { return Rng(state_, stream + 1); }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  /// Uniform on the open interval (0,1); never returns an endpoint.
  double uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  /// Integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    // Multiply-shift; bias is < 2^-64 * n, irrelevant at our scales.
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  double exponential() { return -std::log(uniform01()); }

  /// Random sign in {-1, +1}.
  double sign() { return (next_u64() & 1u) ? 1.0 : -1.0; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace ritznet
