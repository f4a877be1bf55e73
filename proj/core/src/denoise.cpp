// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "pdn/denoise.hpp"

#include <cmath>
#include <string>

#include "pdn/errors.hpp"

namespace pdn {
namespace {

// Rounding can leave 1 - c3 - c4^2 a few ulps below zero when eta == 1
// and t_prev == t.
constexpr double kRadicandSlack = 1e-12;

void check_step(const StepCoefficients& c, int k) {
  const std::string at = " at sampling step " + std::to_string(k);
  if (!(c.c2 > 0.0 && c.c2 <= 1.0)) throw ScheduleError("c2 outside (0, 1]" + at);
  if (!(c.c3 > 0.0 && c.c3 <= 1.0)) throw ScheduleError("c3 outside (0, 1]" + at);
  if (!(c.c4 >= 0.0) || !std::isfinite(c.c4)) throw ScheduleError("c4 negative" + at);
  if (!std::isfinite(c.c1) || c.c1 < 0.0) throw ScheduleError("c1 invalid" + at);
  if (1.0 - c.c3 - c.c4 * c.c4 < -kRadicandSlack) {
    throw ScheduleError("1 - c3 - c4^2 is negative" + at + " (eta too large)");
  }
}

}  // namespace

double StepCoefficients::direction() const noexcept {
  const double r = 1.0 - c3 - c4 * c4;
  return r > 0.0 ? std::sqrt(r) : 0.0;
}

Schedule make_schedule(int sampling_steps, double eta, int num_train_steps) {
  if (num_train_steps < 2) throw ScheduleError("need at least two training steps");
  if (sampling_steps < 1 || sampling_steps > num_train_steps) {
    throw ScheduleError("sampling steps must lie in [1, " + std::to_string(num_train_steps) +
                        "], got " + std::to_string(sampling_steps));
  }
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw ScheduleError("eta must be finite and >= 0");

  Schedule s;
  s.num_train_steps = num_train_steps;
  s.sampling_steps = sampling_steps;
  s.eta = eta;
  const auto t_count = static_cast<std::size_t>(num_train_steps);
  s.betas.resize(t_count);
  s.alphas_cumprod.resize(t_count);
  double prod = 1.0;
  for (std::size_t t = 0; t < t_count; ++t) {
    s.betas[t] = kBetaStart + (kBetaEnd - kBetaStart) * static_cast<double>(t) /
                                  static_cast<double>(t_count - 1);
    prod *= 1.0 - s.betas[t];
    s.alphas_cumprod[t] = prod;
    if (t > 0 && !(s.alphas_cumprod[t] < s.alphas_cumprod[t - 1])) {
      throw ScheduleError("alphas_cumprod is not strictly decreasing");
    }
  }

  const double stride = static_cast<double>(num_train_steps) / sampling_steps;
  for (int k = 0; k < sampling_steps; ++k) {
    s.timesteps.push_back(static_cast<int>(std::lround(num_train_steps - k * stride)) - 1);
  }
  for (int k = 0; k < sampling_steps; ++k) {
    const double at = s.alphas_cumprod[static_cast<std::size_t>(s.timesteps[k])];
    const double ap = k + 1 < sampling_steps
                          ? s.alphas_cumprod[static_cast<std::size_t>(s.timesteps[k + 1])]
                          : s.alphas_cumprod[0];
    StepCoefficients c;
    c.c1 = std::sqrt(1.0 - at);
    c.c2 = at;
    c.c3 = ap;
    c.c4 = eta * std::sqrt((1.0 - ap) / (1.0 - at)) * std::sqrt(1.0 - at / ap);
    check_step(c, k);
    s.steps.push_back(c);
  }
  return s;
}

Tensor denoise_plain(const Tensor& x, const Tensor& e, const StepCoefficients& c,
                     const Tensor& noise) {
  require_same_shape(x.shape(), e.shape(), "denoise_plain(x, e)");
  require_same_shape(x.shape(), noise.shape(), "denoise_plain(x, noise)");
  const double sqrt_c2 = std::sqrt(c.c2);
  const double sqrt_c3 = std::sqrt(c.c3);
  const double dir = c.direction();
  Tensor out(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double pred_x0 = (x[i] - c.c1 * e[i]) / sqrt_c2;
    const double dir_x = dir * e[i];
    out[i] = sqrt_c3 * pred_x0 + dir_x + c.c4 * noise[i];
  }
  return out;
}

AffineStep denoise_factors(const Tensor& e, const StepCoefficients& c, const Tensor& noise) {
  require_same_shape(e.shape(), noise.shape(), "denoise_factors(e, noise)");
  AffineStep step;
  step.factor = std::sqrt(c.c3 / c.c2);
  const double dir = c.direction();
  const double e_coef = step.factor * c.c1;
  step.add_part = Tensor(e.shape());
  for (std::size_t i = 0; i < e.size(); ++i) {
    step.add_part[i] = dir * e[i] + c.c4 * noise[i] - e_coef * e[i];
  }
  return step;
}

Tensor apply_affine(const Tensor& x, const AffineStep& step) {
  require_same_shape(x.shape(), step.add_part.shape(), "apply_affine");
  Tensor out(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = step.factor * x[i] + step.add_part[i];
  return out;
}

HybridState denoise_encrypted(const EncCooTensor& y, const Tensor& z, const AffineStep& step,
                              const he::HeBackend& backend) {
  require_same_shape(y.shape, z.shape(), "denoise_encrypted(y, z)");
  require_same_shape(z.shape(), step.add_part.shape(), "denoise_encrypted(z, add_part)");
  HybridState out;
  out.y = partial_add(partial_mul(y, step.factor, backend), step.add_part, backend);
  out.z = apply_affine(z, step);
  for (std::size_t i : y.indices) out.z[i] = 0.0;
  return out;
}

}  // namespace pdn
