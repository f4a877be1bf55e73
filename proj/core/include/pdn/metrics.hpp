// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>

#include "pdn/tensor.hpp"

namespace pdn {

/// Similarity of a candidate tensor to a reference tensor.
struct MetricReport {
  double cosine = 0.0;
  double mse = 0.0;
  /// +infinity when mse == 0.
  double psnr_db = 0.0;
  double ssim = 0.0;
  double kl = 0.0;
};

/// Over flattened tensors. Throws UndefinedMetricError if both are all-zero;
/// a single all-zero tensor yields 0.
double cosine(const Tensor& a, const Tensor& b);
double mse(const Tensor& a, const Tensor& b);

/// 10 log10(range^2 / mse), or +infinity when mse == 0.
double psnr(const Tensor& a, const Tensor& b, double data_range);

inline constexpr std::size_t kSsimWindow = 7;

/// Mean SSIM over all valid window positions of every channel, with a
/// uniform window, K1 = 0.01, K2 = 0.03 and sample (N - 1) covariances.
/// Throws ConfigError if the window does not fit.
double ssim(const Tensor& a, const Tensor& b, double data_range,
            std::size_t window = kSsimWindow);

inline constexpr std::size_t kKlBins = 256;
inline constexpr double kKlEpsilon = 1e-10;

/// KL(P_a || P_b) of 256-bin histograms over the joint [min, max] of both
/// tensors, each bin smoothed by kKlEpsilon. 0 when the histograms match.
double kl_divergence(const Tensor& a, const Tensor& b);

/// max - min of the tensor, or 1 when that is 0.
double value_range(const Tensor& t);

/// All five metrics of `candidate` against `reference`. data_range defaults
/// to value_range(reference). Throws ConfigError for planes smaller than
/// the SSIM window.
MetricReport compare(const Tensor& reference, const Tensor& candidate,
                     std::optional<double> data_range = std::nullopt);

}  // namespace pdn
