// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "pdn/bench.hpp"
#include "pdn/errors.hpp"
#include "pdn/metrics.hpp"
#include "pdn/sampler/sampling.hpp"
#include "pdn/sweep.hpp"

namespace pdn {
namespace {

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n' ? 1 : 0;
  return n;
}

TEST(Bench, SmallShapeOrderingAndAccuracy) {
  BenchConfig cfg;
  cfg.shape = Shape{4, 6, 6};
  const BenchResult r = run_bench(cfg);
  ASSERT_EQ(r.rows.size(), 4u);
  const double plain = r.median_seconds("Plain");
  const double sparse = r.median_seconds("Sparse");
  const double enc = r.median_seconds("Enc");
  const double opt = r.median_seconds("Enc_opt");
  EXPECT_LT(plain, sparse);
  EXPECT_LT(sparse, enc);
  EXPECT_LT(opt, enc);
  EXPECT_GT(r.sparsity, 0.0);
  for (const auto& row : r.rows) {
    EXPECT_LT(row.max_abs_error, 1e-4) << row.variant;
    if (row.variant == "Enc") {
      EXPECT_EQ(row.ciphertexts, cfg.shape.numel());
    }
    if (row.variant == "Enc_opt") {
      EXPECT_EQ(row.ciphertexts, cfg.shape.plane());
    }
    if (row.variant == "Sparse") {
      EXPECT_EQ(row.ciphertexts, 1u);
      EXPECT_LE(row.split_seconds, row.seconds);
      EXPECT_NEAR(1.0 - static_cast<double>(row.encrypted_values) / 144.0, r.sparsity, 1e-12);
    }
  }
  EXPECT_TRUE(std::isnan(BenchResult{}.median_seconds("Enc")));
}

TEST(Bench, CsvAndSkips) {
  BenchConfig cfg;
  cfg.shape = Shape{2, 4, 4};
  cfg.repeats = 2;
  cfg.run_enc = false;
  const BenchResult r = run_bench(cfg);
  EXPECT_TRUE(std::isnan(r.median_seconds("Enc")));
  EXPECT_FALSE(std::isnan(r.median_seconds("Enc_opt")));
  const std::string csv = bench_csv(r);
  EXPECT_EQ(count_lines(csv), 1 + r.rows.size());
  EXPECT_EQ(csv.find("variant"), 0u);
  EXPECT_EQ(csv.find("Enc,"), std::string::npos);
  EXPECT_NE(bench_table(r).find("Sparse"), std::string::npos);
}

TEST(Bench, ConfigErrors) {
  BenchConfig cfg;
  cfg.shape = Shape{1, 2, 2};
  cfg.repeats = 0;
  EXPECT_THROW((void)run_bench(cfg), ConfigError);
  cfg.repeats = 1;
  cfg.step = cfg.sampling_steps;
  EXPECT_THROW((void)run_bench(cfg), ConfigError);
  cfg.step = 0;
  cfg.threshold = 1.0;
  EXPECT_THROW((void)run_bench(cfg), ConfigError);
}

TEST(Sweep, LatentsAreSampledOutputs) {
  SweepConfig cfg;
  cfg.shape = Shape{4, 8, 8};
  cfg.samples = 2;
  cfg.sampling_steps = 3;
  cfg.seed = 5;
  const auto xs = sampled_latents(cfg);
  ASSERT_EQ(xs.size(), 2u);
  sampler::SampleConfig sc;
  sc.shape = cfg.shape;
  sc.steps = 3;
  sc.seed = 6;
  EXPECT_EQ(xs[1], sampler::sample_plain(sc));
}

TEST(Sweep, TrendsAcrossThresholds) {
  SweepConfig cfg;
  cfg.shape = Shape{4, 16, 16};
  cfg.samples = 3;
  const SweepResult r = run_sweep(cfg);
  ASSERT_EQ(r.rows.size(), cfg.thresholds.size());
  EXPECT_EQ(r.samples.size(), cfg.thresholds.size() * 3);
  for (std::size_t i = 1; i < r.rows.size(); ++i) {
    EXPECT_GE(r.rows[i].sparsity, r.rows[i - 1].sparsity);
    EXPECT_GE(r.rows[i].cos_xz, r.rows[i - 1].cos_xz - 1e-12);
    EXPECT_LE(r.rows[i].cos_xy, r.rows[i - 1].cos_xy + 1e-12);
  }
  const SweepRow& low = r.rows[1];  // threshold 0.01
  EXPECT_GT(low.cos_xy, 0.99);
  EXPECT_LT(low.cos_xz, 0.30);
  EXPECT_LT(low.kl_xy, low.kl_xz);
  EXPECT_EQ(count_lines(sweep_csv(r)), 1 + r.rows.size());
}

TEST(Sweep, MeasureLeakageDirect) {
  Tensor x(Shape{1, 2, 2}, {1.0, 2.0, 3.0, 4.0});
  const LeakageSample s = measure_leakage(x, 0.25, CostFunction::kUniform);
  EXPECT_EQ(s.sparsity, 0.25);
  EXPECT_GT(s.cos_xy, 0.9);
}

TEST(Sweep, RejectsBadThresholds) {
  SweepConfig cfg;
  cfg.shape = Shape{1, 4, 4};
  for (double bad : {0.0, 1.0, -0.5}) {
    cfg.thresholds = {0.01, bad};
    EXPECT_THROW((void)run_sweep(cfg), ConfigError) << bad;
  }
  cfg.thresholds = {};
  EXPECT_THROW((void)run_sweep(cfg), ConfigError);
  cfg.thresholds = {0.1};
  cfg.samples = 0;
  EXPECT_THROW((void)run_sweep(cfg), ConfigError);
}

}  // namespace
}  // namespace pdn
