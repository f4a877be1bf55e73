// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pdn/he/backend.hpp"
#include "pdn/sparse.hpp"
#include "pdn/tensor.hpp"

namespace pdn {

/// Scalars of one sampling step.
///   pred_x0 = (x - c1 * e) / sqrt(c2)
///   x_prev  = sqrt(c3) * pred_x0 + sqrt(1 - c3 - c4^2) * e + c4 * noise
struct StepCoefficients {
  double c1 = 0.0;
  double c2 = 1.0;
  double c3 = 1.0;
  double c4 = 0.0;

  /// sqrt(1 - c3 - c4^2), with rounding noise below zero clamped away.
  [[nodiscard]] double direction() const noexcept;

  friend bool operator==(const StepCoefficients&, const StepCoefficients&) = default;
};

struct Schedule {
  int num_train_steps = 1000;
  std::vector<double> betas;
  std::vector<double> alphas_cumprod;
  int sampling_steps = 0;
  double eta = 0.0;
  /// Training timestep of each sampling step, strictly decreasing.
  std::vector<int> timesteps;
  std::vector<StepCoefficients> steps;
};

inline constexpr double kBetaStart = 1e-4;
inline constexpr double kBetaEnd = 0.02;

/// Linear betas over num_train_steps, trailing timestep spacing
/// t_k = round(T - k*T/S) - 1, and the deterministic-to-stochastic family
/// selected by eta. The last step targets alphas_cumprod[0]. Throws
/// ScheduleError on bad arguments or a violated coefficient invariant.
Schedule make_schedule(int sampling_steps, double eta, int num_train_steps = 1000);

/// One step written out as in the reference loop: pred_x0, direction, noise.
Tensor denoise_plain(const Tensor& x, const Tensor& e, const StepCoefficients& c,
                     const Tensor& noise);

/// x_prev == factor * x + add_part for every x.
struct AffineStep {
  double factor = 1.0;
  Tensor add_part;
};

/// factor = sqrt(c3 / c2);
/// add_part = direction * e + c4 * noise - factor * c1 * e.
AffineStep denoise_factors(const Tensor& e, const StepCoefficients& c, const Tensor& noise);

/// factor * x + add_part.
Tensor apply_affine(const Tensor& x, const AffineStep& step);

/// Encrypted part and plaintext part after one encrypted step.
struct HybridState {
  EncCooTensor y;
  Tensor z;
};

/// y' = partial_add(partial_mul(y, factor), add_part); z' = factor * z +
/// add_part on the complement of y's indices and 0 on them. Consumes one
/// level of every ciphertext; DepthError propagates so the caller can
/// re-encrypt.
HybridState denoise_encrypted(const EncCooTensor& y, const Tensor& z, const AffineStep& step,
                              const he::HeBackend& backend);

}  // namespace pdn
