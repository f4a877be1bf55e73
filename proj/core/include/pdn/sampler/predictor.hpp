// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pdn/tensor.hpp"

namespace pdn::sampler {

inline constexpr std::size_t kCondTokens = 77;
inline constexpr std::size_t kCondDim = 16;

/// Embedded prompt, kCondTokens x kCondDim, row-major.
struct ConditionTensor {
  std::size_t tokens = kCondTokens;
  std::size_t dim = kCondDim;
  std::vector<double> data;

  friend bool operator==(const ConditionTensor&, const ConditionTensor&) = default;
};

struct PredictorConfig {
  std::size_t latent_channels = 4;
  std::size_t hidden_channels = 16;
  /// Seed of the procedurally generated weights. Public: both roles know it.
  std::uint64_t weight_seed = 0x70644d6f64656c31ULL;

  friend bool operator==(const PredictorConfig&, const PredictorConfig&) = default;
};

/// 3x3 convolution with zero padding. weights are [out][in][3][3].
struct Conv3x3 {
  std::size_t in_channels = 0;
  std::size_t out_channels = 0;
  std::vector<double> weights;
  std::vector<double> bias;

  [[nodiscard]] Tensor apply(const Tensor& x) const;
  [[nodiscard]] double& weight(std::size_t o, std::size_t i, std::size_t kh, std::size_t kw) {
    return weights[((o * in_channels + i) * 3 + kh) * 3 + kw];
  }
};

/// First layer, run by the client: conv1 plus a sinusoidal timestep
/// embedding added per hidden channel.
class ClientLayer {
 public:
  explicit ClientLayer(const PredictorConfig& config);

  [[nodiscard]] Tensor forward(const Tensor& x, int timestep) const;
  /// Per-channel offset added after conv1.
  [[nodiscard]] std::vector<double> timestep_embedding(int timestep) const;
  [[nodiscard]] const Conv3x3& conv() const noexcept { return conv1_; }
  [[nodiscard]] std::size_t out_channels() const noexcept { return conv1_.out_channels; }

 private:
  Conv3x3 conv1_;
};

/// Remaining layers, run by the server:
/// e = conv2(GELU(a + cond_proj(cond))).
class ServerModel {
 public:
  explicit ServerModel(const PredictorConfig& config);

  [[nodiscard]] Tensor forward(const Tensor& activation, const ConditionTensor& cond) const;
  /// cond_proj(cond): one bias per hidden channel.
  [[nodiscard]] std::vector<double> project(const ConditionTensor& cond) const;
  [[nodiscard]] const Conv3x3& conv() const noexcept { return conv2_; }

 private:
  std::size_t hidden_;
  std::vector<double> proj_weights_;  // [hidden][tokens * dim]
  std::vector<double> proj_bias_;
  Conv3x3 conv2_;
};

/// Toy noise predictor split into a client part and a server part.
///
/// conv1 hidden channels 0..C-1 carry +x and C..2C-1 carry -x (plus small
/// random taps); conv2 recombines them as GELU(x + b) - GELU(-x + b'),
/// which is x when the two biases agree. The prediction therefore tracks
/// the latent, perturbed by the prompt and the timestep, so sampled
/// latents stay bounded without trained weights.
struct ToyPredictor {
  PredictorConfig config;
  ClientLayer client;
  ServerModel server;

  explicit ToyPredictor(const PredictorConfig& cfg = {})
      : config(cfg), client(cfg), server(cfg) {}

  [[nodiscard]] Tensor predict(const Tensor& x, const ConditionTensor& cond, int timestep) const {
    return server.forward(client.forward(x, timestep), cond);
  }
};

double gelu(double x) noexcept;

}  // namespace pdn::sampler
