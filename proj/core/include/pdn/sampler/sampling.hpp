// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pdn/sampler/predictor.hpp"
#include "pdn/tensor.hpp"

namespace pdn::sampler {

struct SampleConfig {
  std::string prompt = "a photograph of an astronaut riding a horse";
  int steps = 10;
  double eta = 0.0;
  std::uint64_t seed = 1;
  std::uint64_t embed_seed = 7;
  Shape shape{4, 32, 32};
  int num_train_steps = 1000;
  PredictorConfig model;
};

/// How sample_plain evaluates each step. Both agree to rounding; kFactored
/// evaluates factor * x + add_part in the same order as the encrypted path,
/// so it is the bit-exact reference for the exact backend.
enum class StepForm { kReference, kFactored };

/// `base` resized so its latent channel count matches `shape`.
PredictorConfig predictor_for(const Shape& shape, PredictorConfig base = {});

/// Throws ConfigError on a non-positive step count, an empty shape or a
/// shape whose channel count the predictor does not take.
void validate(const SampleConfig& config);

/// Initial latent from the seed's kInitialLatent stream.
Tensor initial_latent(const SampleConfig& config);

/// Noise-stream seed shared by the plaintext loop and the server role.
std::uint64_t step_noise_seed(std::uint64_t seed);

/// Plaintext sampling loop: predict, then one denoising step, S times. A
/// fresh noise tensor is drawn every step, even when eta == 0. If
/// draw_log is given, it receives the cumulative noise draw count after
/// each step.
Tensor sample_plain(const SampleConfig& config, StepForm form = StepForm::kFactored,
                    std::vector<std::uint64_t>* draw_log = nullptr);

}  // namespace pdn::sampler
