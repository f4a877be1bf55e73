// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "pdn/denoise.hpp"
#include "pdn/distortion.hpp"
#include "pdn/metrics.hpp"
#include "pdn/random.hpp"
#include "pdn/sampler/embedding.hpp"
#include "pdn/sampler/predictor.hpp"
#include "pdn/session.hpp"

namespace {

pdn::Tensor latent(std::size_t side) {
  pdn::GaussianSource g(5);
  return g.draw(pdn::Shape{4, side, side});
}

void BM_HillCost(benchmark::State& state) {
  const auto x = latent(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pdn::hill_cost(x));
}
BENCHMARK(BM_HillCost)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);

void BM_RemovePointsFast(benchmark::State& state) {
  const auto x = latent(static_cast<std::size_t>(state.range(0)));
  const auto cost = pdn::hill_cost(x);
  for (auto _ : state) benchmark::DoNotOptimize(pdn::remove_points_fast(x, cost, 0.01));
}
BENCHMARK(BM_RemovePointsFast)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);

void BM_RemovePointsBasic(benchmark::State& state) {
  const auto x = latent(static_cast<std::size_t>(state.range(0)));
  const auto cost = pdn::hill_cost(x);
  for (auto _ : state) benchmark::DoNotOptimize(pdn::remove_points_basic(x, cost, 0.01));
}
BENCHMARK(BM_RemovePointsBasic)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_PredictorForward(benchmark::State& state) {
  const auto x = latent(32);
  const pdn::sampler::ToyPredictor model{};
  const auto cond = pdn::sampler::embed_prompt("a red bicycle", 3);
  for (auto _ : state) benchmark::DoNotOptimize(model.predict(x, cond, 500));
}
BENCHMARK(BM_PredictorForward)->Unit(benchmark::kMicrosecond);

void BM_Ssim(benchmark::State& state) {
  const auto a = latent(64);
  auto b = a;
  for (auto& v : b.values()) v *= 0.9;
  for (auto _ : state) benchmark::DoNotOptimize(pdn::ssim(a, b, pdn::value_range(a)));
}
BENCHMARK(BM_Ssim)->Unit(benchmark::kMicrosecond);

void BM_Session(benchmark::State& state) {
  pdn::sampler::ClientConfig config;
  config.sample.steps = 5;
  config.backend = state.range(0) == 0 ? pdn::he::BackendKind::kMockExact
                                       : pdn::he::BackendKind::kCkksLite;
  for (auto _ : state) benchmark::DoNotOptimize(pdn::run_session(config));
}
BENCHMARK(BM_Session)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
