#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace occbench {

// Deterministic RNG primitives. All randomness in the toolkit flows through
// these so that outputs are reproducible across runs, platforms and worker
// schedules. Standard-library distributions are avoided on purpose: their
// exact output sequences are implementation-defined.

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Stateless mix of two 64-bit values; used for counter-based draws.
inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
  std::uint64_t state = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
  return splitmix64(state);
}

inline std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

/// Seed for a named sub-stream, e.g. per-video streams keyed by video_id.
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag) {
  return mix64(seed, fnv1a64(tag));
}

/// Seed for an indexed sub-stream, e.g. per-occluder or per-token streams.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed, index);
}

/// Uniform double in [0, 1) from a single 64-bit word (53-bit mantissa).
inline double to_unit_double(std::uint64_t word) {
  return static_cast<double>(word >> 11) * 0x1.0p-53;
}

/// Counter-based uniform draw: deterministic in (seed, counter), independent
/// of evaluation order.
inline double uniform_at(std::uint64_t seed, std::uint64_t counter) {
  return to_unit_double(mix64(seed, counter));
}

/// Sequential splitmix64 generator with a few small distributions on top.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  using result_type = std::uint64_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~0ULL; }
  result_type operator()() { return splitmix64(state_); }

  double uniform() { return to_unit_double((*this)()); }

  double uniform_in(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Integer in [0, n); n must be > 0.
  std::uint64_t uniform_index(std::uint64_t n) {
    // Multiply-shift; bias is negligible for the small n used here.
    return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)) % n;
  }

  /// Standard normal via Box-Muller.
  double gaussian() {
    double u1 = uniform();
    double u2 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t state_;
};

}  // namespace occbench
