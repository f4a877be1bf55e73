// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>

#include "pdn/denoise.hpp"
#include "pdn/errors.hpp"
#include "pdn/metrics.hpp"
#include "pdn/random.hpp"
#include "pdn/sampler/embedding.hpp"
#include "pdn/sampler/predictor.hpp"
#include "pdn/sampler/sampling.hpp"
#include "pdn/session.hpp"
#include "test_util.hpp"

namespace pdn::sampler {
namespace {

using pdn::testing::gaussian_tensor;
using pdn::testing::max_abs_diff;

double row_norm(const ConditionTensor& c, std::size_t r) {
  double s = 0.0;
  for (std::size_t j = 0; j < c.dim; ++j) s += c.data[r * c.dim + j] * c.data[r * c.dim + j];
  return std::sqrt(s);
}

double row_cosine(const ConditionTensor& a, const ConditionTensor& b, std::size_t r) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.dim; ++j) s += a.data[r * a.dim + j] * b.data[r * b.dim + j];
  return s / (row_norm(a, r) * row_norm(b, r));
}

TEST(Embedding, DeterministicUnitRows) {
  const ConditionTensor a = embed_prompt("a red fox", 11);
  const ConditionTensor b = embed_prompt("a red fox", 11);
  EXPECT_EQ(a, b);
  ASSERT_EQ(a.data.size(), kCondTokens * kCondDim);
  for (std::size_t r = 0; r < kCondTokens; ++r) EXPECT_NEAR(row_norm(a, r), 1.0, 1e-12);
}

TEST(Embedding, EmptyPromptRejected) {
  EXPECT_THROW((void)embed_prompt("", 1), InputError);
  EXPECT_THROW((void)embed_prompt("  \t\n", 1), InputError);
}

TEST(Embedding, TokenizePadsAndTruncates) {
  const auto t = tokenize("  one two  ");
  ASSERT_EQ(t.size(), kCondTokens);
  EXPECT_EQ(t[0], "one");
  EXPECT_EQ(t[1], "two");
  EXPECT_EQ(t[2], "<pad>");
  std::string many;
  for (int i = 0; i < 100; ++i) many += "w" + std::to_string(i) + " ";
  const auto u = tokenize(many);
  ASSERT_EQ(u.size(), kCondTokens);
  EXPECT_EQ(u.back(), "w76");
}

TEST(Embedding, SeedDecorrelatesRows) {
  const ConditionTensor base = embed_prompt("a red fox", 1);
  double total = 0.0;
  for (std::uint64_t s = 2; s < 102; ++s) {
    const ConditionTensor other = embed_prompt("a red fox", s);
    total += std::abs(row_cosine(base, other, 0));
  }
  EXPECT_LT(total / 100.0, 0.5);
}

TEST(Embedding, FnvKnownValues) {
  // Standard 64-bit FNV-1a test vectors.
  EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(fnv1a("foobar"), 0x85944171f73967e8ULL);
}

// Test-side convolution straight from the definition.
Tensor conv_ref(const Conv3x3& conv, const Tensor& x) {
  const std::size_t h = x.shape().height;
  const std::size_t w = x.shape().width;
  Tensor out(Shape{conv.out_channels, h, w});
  for (std::size_t o = 0; o < conv.out_channels; ++o) {
    for (std::size_t r = 0; r < h; ++r) {
      for (std::size_t c = 0; c < w; ++c) {
        double acc = conv.bias[o];
        for (std::size_t i = 0; i < conv.in_channels; ++i) {
          for (int dr = -1; dr <= 1; ++dr) {
            for (int dc = -1; dc <= 1; ++dc) {
              const long rr = static_cast<long>(r) + dr;
              const long cc = static_cast<long>(c) + dc;
              if (rr < 0 || cc < 0 || rr >= static_cast<long>(h) || cc >= static_cast<long>(w)) {
                continue;
              }
              const double wt =
                  conv.weights[((o * conv.in_channels + i) * 3 + static_cast<std::size_t>(dr + 1)) *
                                   3 +
                               static_cast<std::size_t>(dc + 1)];
              acc += wt * x.at(i, static_cast<std::size_t>(rr), static_cast<std::size_t>(cc));
            }
          }
        }
        out.at(o, r, c) = acc;
      }
    }
  }
  return out;
}

double gelu_ref(double v) { return 0.5 * v * (1.0 + std::erf(v / std::sqrt(2.0))); }

TEST(Predictor, ClientLayerMatchesReference) {
  const PredictorConfig cfg;
  const ClientLayer layer(cfg);
  const Tensor x = gaussian_tensor(Shape{4, 6, 5}, 3);
  for (int t : {0, 1, 499, 999}) {
    Tensor expected = conv_ref(layer.conv(), x);
    const auto emb = layer.timestep_embedding(t);
    ASSERT_EQ(emb.size(), layer.out_channels());
    for (std::size_t o = 0; o < emb.size(); ++o) {
      EXPECT_LE(std::abs(emb[o]), 0.1 + 1e-15);
      for (std::size_t r = 0; r < 6; ++r) {
        for (std::size_t c = 0; c < 5; ++c) expected.at(o, r, c) += emb[o];
      }
    }
    EXPECT_LE(max_abs_diff(layer.forward(x, t), expected), 1e-12);
  }
}

TEST(Predictor, ClientLayerZeroInputIsBiasPlusEmbedding) {
  const ClientLayer layer(PredictorConfig{});
  const Tensor out = layer.forward(Tensor(Shape{4, 3, 3}), 250);
  const auto emb = layer.timestep_embedding(250);
  for (std::size_t o = 0; o < layer.out_channels(); ++o) {
    for (std::size_t i = 0; i < 9; ++i) {
      EXPECT_DOUBLE_EQ(out[o * 9 + i], layer.conv().bias[o] + emb[o]);
    }
  }
}

TEST(Predictor, ServerModelMatchesReference) {
  const PredictorConfig cfg;
  const ServerModel server(cfg);
  const ClientLayer layer(cfg);
  const ConditionTensor cond = embed_prompt("mountain lake at dawn", 3);
  const Tensor a = layer.forward(gaussian_tensor(Shape{4, 7, 7}, 9), 700);
  const auto proj = server.project(cond);
  Tensor hidden = a;
  for (std::size_t o = 0; o < a.shape().channels; ++o) {
    for (std::size_t i = 0; i < 49; ++i) hidden[o * 49 + i] = gelu_ref(a[o * 49 + i] + proj[o]);
  }
  const Tensor expected = conv_ref(server.conv(), hidden);
  EXPECT_LE(max_abs_diff(server.forward(a, cond), expected), 1e-12);
  EXPECT_EQ(expected.shape(), (Shape{4, 7, 7}));
}

TEST(Predictor, PredictionTracksLatent) {
  const ToyPredictor model;
  const ConditionTensor cond = embed_prompt("city street", 1);
  const Tensor x = gaussian_tensor(Shape{4, 16, 16}, 4);
  EXPECT_GT(cosine(model.predict(x, cond, 500), x), 0.5);
}

TEST(Predictor, WeightsDependOnSeed) {
  PredictorConfig other;
  other.weight_seed ^= 1;
  EXPECT_NE(ClientLayer(PredictorConfig{}).conv().weights, ClientLayer(other).conv().weights);
  EXPECT_EQ(ClientLayer(PredictorConfig{}).conv().weights,
            ClientLayer(PredictorConfig{}).conv().weights);
}

SampleConfig small_config(int steps = 5) {
  SampleConfig sc;
  sc.steps = steps;
  sc.shape = Shape{4, 8, 8};
  return sc;
}

TEST(SamplePlain, Deterministic) {
  const SampleConfig sc = small_config();
  EXPECT_EQ(sample_plain(sc).storage(), sample_plain(sc).storage());
}

TEST(SamplePlain, ReferenceAndFactoredAgree) {
  for (double eta : {0.0, 0.5, 1.0}) {
    SampleConfig sc = small_config(10);
    sc.eta = eta;
    EXPECT_LE(max_abs_diff(sample_plain(sc, StepForm::kReference),
                           sample_plain(sc, StepForm::kFactored)),
              1e-10)
        << eta;
  }
}

TEST(SamplePlain, SingleStepClosedForm) {
  const SampleConfig sc = small_config(1);
  const Schedule sched = make_schedule(1, 0.0);
  const ToyPredictor model(sc.model);
  const Tensor x0 = initial_latent(sc);
  const Tensor e = model.predict(x0, embed_prompt(sc.prompt, sc.embed_seed), sched.timesteps[0]);
  const double a = sched.alphas_cumprod[static_cast<std::size_t>(sched.timesteps[0])];
  Tensor expected = x0;
  for (std::size_t i = 0; i < x0.size(); ++i) {
    // eta = 0, last step: prediction of the clean latent.
    expected[i] = (x0[i] - std::sqrt(1.0 - a) * e[i]) / std::sqrt(a) * std::sqrt(sched.alphas_cumprod[0]) +
                  std::sqrt(1.0 - sched.alphas_cumprod[0]) * e[i];
  }
  EXPECT_LE(max_abs_diff(sample_plain(sc, StepForm::kReference), expected), 1e-9);
}

TEST(SamplePlain, PromptAndSeedMatter) {
  SampleConfig a = small_config();
  SampleConfig b = a;
  b.prompt = "a bowl of fruit";
  EXPECT_GT(max_abs_diff(sample_plain(a), sample_plain(b)), 1e-6);
  SampleConfig c = a;
  c.seed = 2;
  EXPECT_GT(max_abs_diff(sample_plain(a), sample_plain(c)), 1e-3);
}

TEST(SamplePlain, DrawsNoiseEveryStep) {
  const SampleConfig sc = small_config(7);
  std::vector<std::uint64_t> log;
  (void)sample_plain(sc, StepForm::kFactored, &log);
  ASSERT_EQ(log.size(), 7u);
  for (std::size_t k = 0; k < log.size(); ++k) EXPECT_EQ(log[k], (k + 1) * sc.shape.numel());
}

TEST(SamplePlain, ChannelCountMustMatchPredictor) {
  SampleConfig sc = small_config(2);
  sc.shape = Shape{3, 8, 8};
  EXPECT_THROW((void)sample_plain(sc), ConfigError);
  sc.model = predictor_for(sc.shape);
  EXPECT_EQ(sc.model.latent_channels, 3u);
  EXPECT_EQ(sample_plain(sc).shape(), sc.shape);
  sc.steps = 0;
  EXPECT_THROW((void)sample_plain(sc), ConfigError);
}

TEST(SamplePlain, StaysBounded) {
  SampleConfig sc = small_config(20);
  sc.shape = Shape{4, 16, 16};
  const Tensor out = sample_plain(sc);
  for (double v : out.values()) ASSERT_LT(std::abs(v), 8.0);
}

ClientConfig client_config(he::BackendKind backend, int steps, double threshold) {
  ClientConfig cc;
  cc.sample = small_config(steps);
  cc.backend = backend;
  cc.threshold = threshold;
  return cc;
}

TEST(PrivateSampling, MockBackendIsBitExact) {
  for (double th : {0.0, 0.01, 0.05}) {
    for (std::uint32_t every : {1u, 3u}) {
      ClientConfig cc = client_config(he::BackendKind::kMockExact, 6, th);
      cc.reencrypt_every = every;
      const PrivateSample ps = sample_private(cc);
      EXPECT_EQ(ps.latent.storage(), sample_plain(cc.sample).storage())
          << th << " " << every;
      EXPECT_TRUE(ps.report.complete);
    }
  }
}

TEST(PrivateSampling, CkksMatchesPlain) {
  ClientConfig cc = client_config(he::BackendKind::kCkksLite, 10, 0.01);
  cc.sample.shape = Shape{4, 16, 16};
  const PrivateSample ps = sample_private(cc);
  const Tensor plain = sample_plain(cc.sample);
  EXPECT_GE(cosine(ps.latent, plain), 0.98);
  EXPECT_LE(mse(ps.latent, plain), 0.01);
}

TEST(PrivateSampling, ThresholdZeroEncryptsEverything) {
  const ClientConfig cc = client_config(he::BackendKind::kMockExact, 2, 0.0);
  const PrivateSample ps = sample_private(cc);
  ASSERT_EQ(ps.report.iterations.size(), 2u);
  for (const auto& r : ps.report.iterations) {
    EXPECT_EQ(r.encrypted_values, cc.sample.shape.numel());
    EXPECT_EQ(r.sparsity, 0.0);
  }
}

TEST(PrivateSampling, ConfigErrors) {
  ClientConfig cc = client_config(he::BackendKind::kMockExact, 2, 0.01);
  cc.reencrypt_every = 0;
  EXPECT_THROW(ClientRole{cc}, ConfigError);
  cc.reencrypt_every = 1;
  for (double bad : {-0.1, 1.0, 2.0, std::nan("")}) {
    cc.threshold = bad;
    EXPECT_THROW(ClientRole{cc}, ConfigError) << bad;
  }
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

TEST(ServerAudit, ServerSourcesNeverTouchClientSecrets) {
  const std::string root = PDN_SOURCE_DIR;
  const std::regex forbidden(R"(SecretKey|secret_key|prompt|embed_seed|decrypt|keygen)",
                             std::regex::icase);
  for (const char* file :
       {"/core/src/sampler/server_role.cpp", "/core/include/pdn/sampler/server_role.hpp"}) {
    const std::string text = slurp(root + file);
    ASSERT_FALSE(text.empty()) << file;
    std::smatch m;
    EXPECT_FALSE(std::regex_search(text, m, forbidden)) << file << ": " << m.str();
  }
}

}  // namespace
}  // namespace pdn::sampler
