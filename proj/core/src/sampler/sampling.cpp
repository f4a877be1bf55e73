// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "pdn/sampler/sampling.hpp"

#include <algorithm>
#include <string>

#include "pdn/denoise.hpp"
#include "pdn/errors.hpp"
#include "pdn/random.hpp"
#include "pdn/sampler/embedding.hpp"

namespace pdn::sampler {

PredictorConfig predictor_for(const Shape& shape, PredictorConfig base) {
  base.latent_channels = shape.channels;
  base.hidden_channels = std::max(base.hidden_channels, 2 * shape.channels);
  return base;
}

void validate(const SampleConfig& config) {
  if (config.steps < 1) throw ConfigError("steps must be >= 1");
  if (config.shape.numel() == 0) throw ConfigError("latent shape is empty");
  if (config.shape.channels != config.model.latent_channels) {
    throw ConfigError("latent has " + std::to_string(config.shape.channels) +
                      " channels but the predictor takes " +
                      std::to_string(config.model.latent_channels));
  }
}

Tensor initial_latent(const SampleConfig& config) {
  GaussianSource source(derive_seed(config.seed, Stream::kInitialLatent));
  return source.draw(config.shape);
}

std::uint64_t step_noise_seed(std::uint64_t seed) { return derive_seed(seed, Stream::kStepNoise); }

Tensor sample_plain(const SampleConfig& config, StepForm form,
                    std::vector<std::uint64_t>* draw_log) {
  validate(config);
  const Schedule schedule = make_schedule(config.steps, config.eta, config.num_train_steps);
  const ToyPredictor model(config.model);
  const ConditionTensor cond = embed_prompt(config.prompt, config.embed_seed);
  GaussianSource noise_source(step_noise_seed(config.seed));
  Tensor x = initial_latent(config);
  for (int k = 0; k < config.steps; ++k) {
    const StepCoefficients& c = schedule.steps[static_cast<std::size_t>(k)];
    const Tensor e = model.predict(x, cond, schedule.timesteps[static_cast<std::size_t>(k)]);
    const Tensor noise = noise_source.draw(config.shape);
    if (form == StepForm::kReference) {
      x = denoise_plain(x, e, c, noise);
    } else {
      x = apply_affine(x, denoise_factors(e, c, noise));
    }
    if (draw_log != nullptr) draw_log->push_back(noise_source.draws());
  }
  return x;
}

}  // namespace pdn::sampler
