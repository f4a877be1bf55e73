// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "pdn/he/error_bound.hpp"

#include <algorithm>
#include <cmath>

#include "pdn/errors.hpp"

namespace pdn::he {
namespace {

constexpr double kTail = 7.0;

// A coefficient-domain error with per-coefficient variance v shows up in the
// real part of every slot with variance N/2 * v.
double slot_sigma(double n, double coeff_variance) { return std::sqrt(n / 2.0 * coeff_variance); }

}  // namespace

double error_bound(const HeParams& params, const OpsProfile& profile) {
  if (!(profile.max_pt_magnitude >= 0.0) || !std::isfinite(profile.max_pt_magnitude) ||
      !(profile.max_value_magnitude >= 0.0) || !std::isfinite(profile.max_value_magnitude)) {
    throw ParameterError("error profile magnitudes must be finite and nonnegative");
  }
  const double n = static_cast<double>(params.ring_degree);
  const double sigma2 = params.error_stddev * params.error_stddev;
  const double delta = params.scale;
  double min_prime = delta;
  for (std::size_t i = 1; i < params.moduli.size(); ++i) {
    min_prime = std::min(min_prime, static_cast<double>(params.moduli[i]));
  }

  // Fresh: encryption error plus rounding of the encoded message.
  double fresh = kTail * slot_sigma(n, sigma2 + 1.0 / 12.0) / delta;
  if (profile.public_key_encryption) {
    // u*e is a product of two random polynomials. In the slot domain that is
    // a pointwise product, so its tail is much heavier than a Gaussian with
    // the same variance; the extra factor 2 covers the observed maxima.
    fresh += 2.0 * kTail * slot_sigma(n, sigma2 * (2.0 * n / 3.0 + n / 2.0)) / delta;
  }

  // Rescale rounding on c0 and c1*s (s has weight N/2); the scale after a
  // rescale may sit anywhere above delta/2.
  const double rescale = kTail * slot_sigma(n, (1.0 + n / 2.0) / 12.0) / (delta / 2.0);
  // Rounding of an encoded multiplier, relative to its own scale.
  const double pt_round = kTail * slot_sigma(n, 1.0 / 12.0) / min_prime;

  const double m = profile.max_pt_magnitude;
  double err = fresh;
  double value = profile.max_value_magnitude;
  for (std::size_t i = 0; i < profile.num_pt_muls; ++i) {
    err = err * (1.0 + m) + value * pt_round + rescale;
    value *= m;
  }
  err += static_cast<double>(profile.num_adds) * fresh;
  return err;
}

}  // namespace pdn::he
