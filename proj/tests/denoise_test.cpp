// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "pdn/denoise.hpp"
#include "pdn/distortion.hpp"
#include "pdn/errors.hpp"
#include "pdn/he/error_bound.hpp"
#include "test_util.hpp"

namespace pdn {
namespace {

using pdn::testing::gaussian_tensor;
using pdn::testing::max_abs_diff;

// One sampling step written the way the algorithm reads, with the schedule
// quantities named instead of c1..c4.
Tensor step_reference(const Tensor& x, const Tensor& e, double alpha_t, double alpha_prev,
                      double sigma, const Tensor& noise) {
  Tensor out(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double pred_x0 = (x[i] - std::sqrt(1.0 - alpha_t) * e[i]) / std::sqrt(alpha_t);
    const double dir_xi = std::sqrt(1.0 - alpha_prev - sigma * sigma) * e[i];
    out[i] = std::sqrt(alpha_prev) * pred_x0 + dir_xi + sigma * noise[i];
  }
  return out;
}

StepCoefficients random_coefficients(Prng& rng) {
  std::uniform_real_distribution<double> u(0.01, 0.99);
  StepCoefficients c;
  c.c2 = u(rng);
  c.c3 = std::min(0.999, c.c2 + (1.0 - c.c2) * u(rng));
  c.c1 = std::sqrt(1.0 - c.c2);
  c.c4 = std::sqrt(1.0 - c.c3) * u(rng);
  return c;
}

TEST(Schedule, LinearBetasAndCumprod) {
  const Schedule s = make_schedule(10, 0.0);
  ASSERT_EQ(s.betas.size(), 1000U);
  EXPECT_DOUBLE_EQ(s.betas.front(), kBetaStart);
  EXPECT_DOUBLE_EQ(s.betas.back(), kBetaEnd);
  double prod = 1.0;
  for (std::size_t t = 0; t < s.betas.size(); ++t) {
    ASSERT_GT(s.betas[t], 0.0);
    ASSERT_LT(s.betas[t], 1.0);
    prod *= 1.0 - s.betas[t];
    ASSERT_NEAR(s.alphas_cumprod[t], prod, 1e-15);
    if (t > 0) ASSERT_LT(s.alphas_cumprod[t], s.alphas_cumprod[t - 1]);
  }
  ASSERT_EQ(s.timesteps.size(), 10U);
  EXPECT_EQ(s.timesteps.front(), 999);
  for (std::size_t k = 1; k < s.timesteps.size(); ++k) {
    EXPECT_LT(s.timesteps[k], s.timesteps[k - 1]);
  }
}

TEST(Schedule, SingleStepClosedForm) {
  const Schedule s = make_schedule(1, 0.0);
  ASSERT_EQ(s.steps.size(), 1U);
  double alpha_bar_last = 1.0;
  for (int t = 0; t < 1000; ++t) alpha_bar_last *= 1.0 - (kBetaStart + (kBetaEnd - kBetaStart) * t / 999.0);
  const StepCoefficients& c = s.steps[0];
  EXPECT_NEAR(c.c2, alpha_bar_last, 1e-15);
  EXPECT_NEAR(c.c1, std::sqrt(1.0 - alpha_bar_last), 1e-15);
  EXPECT_DOUBLE_EQ(c.c3, 1.0 - kBetaStart);
  EXPECT_EQ(c.c4, 0.0);
}

TEST(Schedule, InvariantsAcrossSweep) {
  for (int steps = 1; steps <= 50; ++steps) {
    for (double eta : {0.0, 0.5, 1.0}) {
      const Schedule s = make_schedule(steps, eta);
      ASSERT_EQ(s.steps.size(), static_cast<std::size_t>(steps));
      for (const StepCoefficients& c : s.steps) {
        ASSERT_GT(c.c2, 0.0);
        ASSERT_LE(c.c2, 1.0);
        ASSERT_GT(c.c3, 0.0);
        ASSERT_LE(c.c3, 1.0);
        ASSERT_GE(c.c4, 0.0);
        // Positive in exact arithmetic; rounding may leave a few ulps below zero.
        ASSERT_GE(1.0 - c.c3 - c.c4 * c.c4, -1e-12);
        ASSERT_GE(c.direction(), 0.0);
        if (eta == 0.0) ASSERT_EQ(c.c4, 0.0);
      }
    }
  }
}

TEST(Schedule, InvalidArguments) {
  EXPECT_THROW((void)make_schedule(0, 0.0), ScheduleError);
  EXPECT_THROW((void)make_schedule(1001, 0.0), ScheduleError);
  EXPECT_THROW((void)make_schedule(10, -0.5), ScheduleError);
  EXPECT_THROW((void)make_schedule(10, 3.0), ScheduleError);
}

TEST(Schedule, CoefficientsMatchDdimDefinition) {
  const Schedule s = make_schedule(7, 0.7);
  for (std::size_t k = 0; k < s.steps.size(); ++k) {
    const double at = s.alphas_cumprod[static_cast<std::size_t>(s.timesteps[k])];
    const double ap = k + 1 < s.steps.size()
                          ? s.alphas_cumprod[static_cast<std::size_t>(s.timesteps[k + 1])]
                          : s.alphas_cumprod[0];
    EXPECT_DOUBLE_EQ(s.steps[k].c1, std::sqrt(1.0 - at));
    EXPECT_DOUBLE_EQ(s.steps[k].c2, at);
    EXPECT_DOUBLE_EQ(s.steps[k].c3, ap);
    EXPECT_NEAR(s.steps[k].c4, 0.7 * std::sqrt((1 - ap) / (1 - at) * (1 - at / ap)), 1e-15);
  }
}

TEST(DenoisePlain, AlgebraicSpecialCases) {
  const Tensor x = gaussian_tensor(Shape{2, 4, 4}, 1);
  const Tensor zero(x.shape());
  StepCoefficients c{0.3, 0.5, 0.8, 0.0};
  const Tensor out = denoise_plain(x, zero, c, zero);
  for (std::size_t i = 0; i < x.size(); ++i) {
    EXPECT_NEAR(out[i], x[i] * std::sqrt(c.c3 / c.c2), 1e-15);
  }
  const StepCoefficients identity{0.7, 0.6, 0.6, 0.0};
  const Tensor same = denoise_plain(x, zero, identity, zero);
  EXPECT_LE(max_abs_diff(same, x), 1e-15);
  EXPECT_THROW((void)denoise_plain(x, Tensor(Shape{1, 1, 1}), c, zero), ShapeError);
}

TEST(DenoisePlain, MatchesLineByLineReference) {
  Prng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const StepCoefficients c = random_coefficients(rng);
    const Shape s{4, 8, 8};
    const Tensor x = gaussian_tensor(s, 10 + static_cast<std::uint64_t>(trial));
    const Tensor e = gaussian_tensor(s, 500 + static_cast<std::uint64_t>(trial));
    const Tensor n = gaussian_tensor(s, 900 + static_cast<std::uint64_t>(trial));
    EXPECT_EQ(denoise_plain(x, e, c, n), step_reference(x, e, c.c2, c.c3, c.c4, n));
  }
}

TEST(DenoiseFactors, IdentityWithPlainStep) {
  Prng rng(3);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const StepCoefficients c = random_coefficients(rng);
    const Shape s{4, 8, 8};
    Tensor x = gaussian_tensor(s, 10 + static_cast<std::uint64_t>(trial));
    for (double& v : x.values()) v *= 5.0;
    const Tensor e = gaussian_tensor(s, 500 + static_cast<std::uint64_t>(trial));
    const Tensor n = gaussian_tensor(s, 900 + static_cast<std::uint64_t>(trial));
    const AffineStep step = denoise_factors(e, c, n);
    EXPECT_DOUBLE_EQ(step.factor, std::sqrt(c.c3 / c.c2));
    worst = std::max(worst, max_abs_diff(apply_affine(x, step), denoise_plain(x, e, c, n)));
  }
  EXPECT_LE(worst, 1e-12);
}

TEST(DenoiseFactors, SpecialCases) {
  const Tensor e = gaussian_tensor(Shape{1, 4, 4}, 4);
  const Tensor zero(e.shape());
  const StepCoefficients c{0.4, 0.6, 0.9, 0.2};
  EXPECT_EQ(denoise_factors(zero, c, zero).add_part, zero);
  const StepCoefficients c0{0.4, 0.6, 0.9, 0.0};
  const AffineStep step = denoise_factors(e, c0, zero);
  const double coef = std::sqrt(1.0 - c0.c3) - std::sqrt(c0.c3 / c0.c2) * c0.c1;
  for (std::size_t i = 0; i < e.size(); ++i) EXPECT_NEAR(step.add_part[i], coef * e[i], 1e-15);
}

TEST(DenoiseFactors, SplitLinearityInPlaintext) {
  const Shape s{4, 16, 16};
  const Tensor x = gaussian_tensor(s, 5);
  const Tensor e = gaussian_tensor(s, 6);
  const Tensor n = gaussian_tensor(s, 7);
  const StepCoefficients c{0.8, 0.36, 0.5, 0.1};
  const AffineStep step = denoise_factors(e, c, n);
  const SplitPair parts = split(x, remove_points_fast(x, hill_cost(x), 0.05));
  const Tensor fy = apply_affine(parts.y, step);
  Tensor fz = parts.z;
  for (double& v : fz.values()) v *= step.factor;
  const Tensor fx = apply_affine(x, step);
  for (std::size_t i = 0; i < x.size(); ++i) {
    EXPECT_NEAR(fy[i] + fz[i], fx[i], 1e-14);
  }
}

TEST(DenoiseFactors, ReconstructsTrajectoryWithTrueNoise) {
  // With e equal to the noise that produced x_t and eta = 0, every step lands
  // exactly on sqrt(a_prev) * x0 + sqrt(1 - a_prev) * eps.
  const Shape s{2, 8, 8};
  const Tensor x0 = gaussian_tensor(s, 8);
  const Tensor eps = gaussian_tensor(s, 9);
  const Schedule sched = make_schedule(20, 0.0);
  const auto mix = [&](double a) {
    Tensor t(s);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = std::sqrt(a) * x0[i] + std::sqrt(1 - a) * eps[i];
    return t;
  };
  Tensor x = mix(sched.steps[0].c2);
  const Tensor zero(s);
  for (const StepCoefficients& c : sched.steps) {
    x = apply_affine(x, denoise_factors(eps, c, zero));
    ASSERT_LE(max_abs_diff(x, mix(c.c3)), 1e-12);
  }
}

class EncryptedStep : public ::testing::TestWithParam<he::BackendKind> {
 protected:
  he::HeParams params = he::HeParams::defaults();
  std::unique_ptr<he::HeBackend> be = he::make_backend(GetParam(), params);
  he::KeyPair keys = be->keygen(31);
  Prng rng{32};
  Shape shape{4, 16, 16};
  Tensor e = gaussian_tensor(shape, 33);
  Tensor noise = gaussian_tensor(shape, 34);
  StepCoefficients c{0.9, 0.2, 0.45, 0.3};
  AffineStep step = denoise_factors(e, c, noise);

  bool exact() const { return GetParam() == he::BackendKind::kMockExact; }
  double bound() const {
    if (exact()) return 0.0;
    he::OpsProfile p;
    p.num_pt_muls = 1;
    p.num_adds = 1;
    p.max_pt_magnitude = step.factor;
    return he::error_bound(params, p);
  }
  Tensor run(const Tensor& y, const Tensor& z) {
    const EncCooTensor ey = encrypt_coo(to_coo(y), *be, keys.secret_key, rng);
    const HybridState h = denoise_encrypted(ey, z, step, *be);
    return merge(decrypt_coo(h.y, *be, keys.secret_key), h.z);
  }
};

TEST_P(EncryptedStep, EmptyEncryptedPartIsPlainStep) {
  const Tensor x = gaussian_tensor(shape, 35);
  EXPECT_EQ(run(Tensor(shape), x), apply_affine(x, step));
}

TEST_P(EncryptedStep, FullyEncrypted) {
  const Tensor x = gaussian_tensor(shape, 36);
  const Tensor out = run(x, Tensor(shape));
  EXPECT_LE(max_abs_diff(out, denoise_plain(x, e, c, noise)), bound() + 1e-12);
  if (exact()) EXPECT_EQ(out, apply_affine(x, step));
}

TEST_P(EncryptedStep, HybridSplitMatchesPlain) {
  const Tensor x = gaussian_tensor(shape, 37);
  const SplitPair parts = split(x, remove_points_fast(x, hill_cost(x), 0.01));
  const Tensor out = run(parts.y, parts.z);
  EXPECT_LE(max_abs_diff(out, denoise_plain(x, e, c, noise)), bound() + 1e-12);
  if (exact()) EXPECT_EQ(out, apply_affine(x, step));
}

TEST_P(EncryptedStep, PlainPartMaskedOnEncryptedSupport) {
  const Tensor x = gaussian_tensor(shape, 38);
  const SplitPair parts = split(x, remove_points_fast(x, hill_cost(x), 0.01));
  const EncCooTensor ey = encrypt_coo(to_coo(parts.y), *be, keys.secret_key, rng);
  const HybridState h = denoise_encrypted(ey, parts.z, step, *be);
  for (std::size_t i : ey.indices) EXPECT_EQ(h.z[i], 0.0);
  EXPECT_EQ(h.y.indices, ey.indices);
}

INSTANTIATE_TEST_SUITE_P(Backends, EncryptedStep,
                         ::testing::Values(he::BackendKind::kCkksLite,
                                           he::BackendKind::kMockExact),
                         [](const auto& info) { return std::string(he::to_string(info.param)); });

}  // namespace
}  // namespace pdn
