// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pdn/distortion.hpp"
#include "pdn/tensor.hpp"

namespace pdn {

/// Leakage sweep: for each threshold, split sampled latents X into the
/// encrypted part Y and the plaintext remainder Z and measure how much of X
/// each one reveals.
struct SweepConfig {
  std::vector<double> thresholds{0.001, 0.01, 0.05, 0.1, 0.3};
  Shape shape{4, 32, 32};
  CostFunction cost = CostFunction::kHill;
  /// Latents are sample_plain outputs for seeds seed, seed+1, ...
  int samples = 1;
  std::uint64_t seed = 1;
  int sampling_steps = 10;
};

/// Per (threshold, latent) measurement.
struct LeakageSample {
  double threshold = 0.0;
  std::uint64_t seed = 0;
  double sparsity = 0.0;
  double cos_xy = 0.0;
  double cos_xz = 0.0;
  double kl_xy = 0.0;
  double kl_xz = 0.0;
  /// Cost, removal and split.
  double seconds = 0.0;
};

/// Per-threshold means over the latents.
struct SweepRow {
  double threshold = 0.0;
  double sparsity = 0.0;
  double cos_xy = 0.0;
  double cos_xz = 0.0;
  double kl_xy = 0.0;
  double kl_xz = 0.0;
  double seconds = 0.0;
};

struct SweepResult {
  std::vector<LeakageSample> samples;
  std::vector<SweepRow> rows;
};

LeakageSample measure_leakage(const Tensor& x, double threshold, CostFunction cost);

/// Throws ConfigError unless every threshold lies in (0, 1).
SweepResult run_sweep(const SweepConfig& config);

std::vector<Tensor> sampled_latents(const SweepConfig& config);

std::string sweep_csv(const SweepResult& result);

}  // namespace pdn
