// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "pdn/sampler/predictor.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "pdn/errors.hpp"
#include "pdn/random.hpp"

namespace pdn::sampler {
namespace {

constexpr double kSideTap = 0.02;     // +-x channels: off-centre and cross taps
constexpr double kFreeTap = 0.15;     // free hidden channels
constexpr double kHiddenBias = 0.05;
constexpr double kProjScale = 0.035;
constexpr double kOutTap = 0.03;
constexpr double kEmbedScale = 0.1;

Prng weight_rng(const PredictorConfig& cfg, std::uint64_t part) {
  return Prng(derive_seed(derive_seed(cfg.weight_seed, Stream::kModelWeights), part));
}

void check_config(const PredictorConfig& cfg) {
  if (cfg.latent_channels == 0 || cfg.hidden_channels < 2 * cfg.latent_channels) {
    throw ConfigError("predictor needs hidden_channels >= 2 * latent_channels > 0");
  }
}

}  // namespace

double gelu(double x) noexcept { return 0.5 * x * (1.0 + std::erf(x / std::numbers::sqrt2)); }

Tensor Conv3x3::apply(const Tensor& x) const {
  const Shape& s = x.shape();
  if (s.channels != in_channels) throw ShapeError("conv input channel count mismatch");
  Tensor out(Shape{out_channels, s.height, s.width});
  const long h = static_cast<long>(s.height);
  const long w = static_cast<long>(s.width);
  for (std::size_t o = 0; o < out_channels; ++o) {
    double* dst = out.values().data() + o * s.plane();
    for (std::size_t p = 0; p < s.plane(); ++p) dst[p] = bias[o];
    for (std::size_t i = 0; i < in_channels; ++i) {
      const double* src = x.values().data() + i * s.plane();
      const double* k = weights.data() + (o * in_channels + i) * 9;
      for (long r = 0; r < h; ++r) {
        for (long c = 0; c < w; ++c) {
          double acc = 0.0;
          for (long a = -1; a <= 1; ++a) {
            const long rr = r + a;
            if (rr < 0 || rr >= h) continue;
            for (long b = -1; b <= 1; ++b) {
              const long cc = c + b;
              if (cc < 0 || cc >= w) continue;
              acc += k[(a + 1) * 3 + (b + 1)] * src[rr * w + cc];
            }
          }
          dst[r * w + c] += acc;
        }
      }
    }
  }
  return out;
}

ClientLayer::ClientLayer(const PredictorConfig& config) {
  check_config(config);
  const std::size_t lc = config.latent_channels;
  const std::size_t hc = config.hidden_channels;
  conv1_.in_channels = lc;
  conv1_.out_channels = hc;
  conv1_.weights.assign(hc * lc * 9, 0.0);
  conv1_.bias.assign(hc, 0.0);
  Prng rng = weight_rng(config, 1);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t o = 0; o < hc; ++o) {
    const double tap = o < 2 * lc ? kSideTap : kFreeTap;
    for (std::size_t i = 0; i < lc; ++i) {
      for (std::size_t k = 0; k < 9; ++k) conv1_.weight(o, i, k / 3, k % 3) = tap * normal(rng);
    }
    conv1_.bias[o] = kHiddenBias * normal(rng);
  }
  for (std::size_t c = 0; c < lc; ++c) {
    conv1_.weight(c, c, 1, 1) += 1.0;
    conv1_.weight(lc + c, c, 1, 1) -= 1.0;
  }
}

std::vector<double> ClientLayer::timestep_embedding(int timestep) const {
  const std::size_t hc = conv1_.out_channels;
  const std::size_t half = hc / 2;
  std::vector<double> emb(hc, 0.0);
  for (std::size_t k = 0; k < half; ++k) {
    const double freq =
        std::exp(-std::log(10000.0) * static_cast<double>(k) / static_cast<double>(half));
    emb[k] = kEmbedScale * std::sin(timestep * freq);
    emb[half + k] = kEmbedScale * std::cos(timestep * freq);
  }
  return emb;
}

Tensor ClientLayer::forward(const Tensor& x, int timestep) const {
  if (!x.all_finite()) throw InputError("latent contains NaN or Inf");
  Tensor a = conv1_.apply(x);
  const std::vector<double> emb = timestep_embedding(timestep);
  const std::size_t plane = x.shape().plane();
  for (std::size_t o = 0; o < emb.size(); ++o) {
    for (std::size_t p = 0; p < plane; ++p) a[o * plane + p] += emb[o];
  }
  return a;
}

ServerModel::ServerModel(const PredictorConfig& config) : hidden_(config.hidden_channels) {
  check_config(config);
  const std::size_t lc = config.latent_channels;
  const std::size_t hc = config.hidden_channels;
  Prng rng = weight_rng(config, 2);
  std::normal_distribution<double> normal(0.0, 1.0);
  proj_weights_.resize(hc * kCondTokens * kCondDim);
  for (double& w : proj_weights_) w = kProjScale * normal(rng);
  proj_bias_.resize(hc);
  for (double& b : proj_bias_) b = kHiddenBias * normal(rng);

  conv2_.in_channels = hc;
  conv2_.out_channels = lc;
  conv2_.weights.assign(lc * hc * 9, 0.0);
  conv2_.bias.assign(lc, 0.0);
  for (std::size_t o = 0; o < lc; ++o) {
    for (std::size_t i = 0; i < hc; ++i) {
      for (std::size_t k = 0; k < 9; ++k) conv2_.weight(o, i, k / 3, k % 3) = kOutTap * normal(rng);
    }
    conv2_.bias[o] = kHiddenBias * normal(rng);
    conv2_.weight(o, o, 1, 1) += 1.0;
    conv2_.weight(o, lc + o, 1, 1) -= 1.0;
  }
}

std::vector<double> ServerModel::project(const ConditionTensor& cond) const {
  const std::size_t n = kCondTokens * kCondDim;
  if (cond.tokens != kCondTokens || cond.dim != kCondDim || cond.data.size() != n) {
    throw ShapeError("condition tensor must be 77x16");
  }
  std::vector<double> out(proj_bias_);
  for (std::size_t o = 0; o < hidden_; ++o) {
    const double* w = proj_weights_.data() + o * n;
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += w[j] * cond.data[j];
    out[o] += acc;
  }
  return out;
}

Tensor ServerModel::forward(const Tensor& activation, const ConditionTensor& cond) const {
  if (activation.shape().channels != hidden_) throw ShapeError("activation channel mismatch");
  const std::vector<double> bias = project(cond);
  Tensor h = activation;
  const std::size_t plane = activation.shape().plane();
  for (std::size_t o = 0; o < hidden_; ++o) {
    for (std::size_t p = 0; p < plane; ++p) {
      double& v = h[o * plane + p];
      v = gelu(v + bias[o]);
    }
  }
  return conv2_.apply(h);
}

}  // namespace pdn::sampler
