#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "occbench/errors.hpp"
#include "occbench/rng.hpp"

namespace occbench {

/// L tokens of dimensionality D, row-major.
struct TokenSequence {
  std::size_t length = 0;  // L
  std::size_t dim = 0;     // D
  std::vector<double> values;

  TokenSequence() = default;
  TokenSequence(std::size_t l, std::size_t d) : length(l), dim(d), values(l * d, 0.0) {}

  double& at(std::size_t token, std::size_t channel) { return values[token * dim + channel]; }
  double at(std::size_t token, std::size_t channel) const { return values[token * dim + channel]; }

  bool operator==(const TokenSequence&) const = default;
};

struct MaskConfig {
  double p = 0.0;  // masking probability
  std::uint64_t seed = 0;
};

/// Per-token keep/drop vector: entry i is 0 with probability p and 1
/// otherwise, drawn counter-based on (seed, i) so the mask is independent
/// of evaluation order.
inline std::vector<std::uint8_t> bernoulli_mask(std::size_t length, const MaskConfig& config) {
  if (!(config.p >= 0.0 && config.p <= 1.0)) {
    throw ProbabilityOutOfRangeError("masking probability must lie in [0,1], got " +
                                     std::to_string(config.p));
  }
  std::vector<std::uint8_t> mask(length, 1);
  for (std::size_t i = 0; i < length; ++i) {
    if (uniform_at(config.seed, i) < config.p) mask[i] = 0;
  }
  return mask;
}

/// Hadamard product with the mask broadcast across the embedding dimension:
/// a dropped token becomes the all-zero row, kept tokens pass unchanged.
inline TokenSequence apply_token_mask(const TokenSequence& sequence,
                                      const std::vector<std::uint8_t>& mask) {
  if (mask.size() != sequence.length) {
    throw LengthMismatchError("mask length " + std::to_string(mask.size()) +
                              " does not match token count " + std::to_string(sequence.length));
  }
  TokenSequence out = sequence;
  for (std::size_t i = 0; i < sequence.length; ++i) {
    if (mask[i] != 0) continue;
    for (std::size_t d = 0; d < sequence.dim; ++d) out.at(i, d) = 0.0;
  }
  return out;
}

/// Inference mode: no token is masked (identity mask).
inline std::vector<std::uint8_t> inference_mask(std::size_t length) {
  return std::vector<std::uint8_t>(length, 1);
}

}  // namespace occbench
