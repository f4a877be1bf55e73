// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>

#include "pdn/tensor.hpp"

namespace pdn {

using Prng = std::mt19937_64;

/// splitmix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed for a named sub-stream of `seed`. Distinct stream ids give
/// statistically independent generators.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// Well-known sub-streams of a sampling seed.
enum class Stream : std::uint64_t {
  kInitialLatent = 1,
  kStepNoise = 2,
  kEncryption = 3,
  kModelWeights = 4,
};

inline std::uint64_t derive_seed(std::uint64_t seed, Stream stream) noexcept {
  return derive_seed(seed, static_cast<std::uint64_t>(stream));
}

/// Standard-normal tensor source that counts every scalar it draws, so two
/// pipelines can be checked to consume the same stream in the same order.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : rng_(seed) {}

  Tensor draw(const Shape& shape);
  [[nodiscard]] std::uint64_t draws() const noexcept { return draws_; }

 private:
  Prng rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uint64_t draws_ = 0;
};

}  // namespace pdn
