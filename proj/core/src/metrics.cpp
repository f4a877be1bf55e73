// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "pdn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "pdn/errors.hpp"

namespace pdn {
namespace {

void check_range(double data_range) {
  if (!(data_range > 0.0) || !std::isfinite(data_range)) {
    throw ConfigError("data_range must be positive and finite");
  }
}

// Fills `hist` with per-bin probabilities over [lo, hi].
void histogram(const Tensor& t, double lo, double hi, std::vector<double>& hist) {
  std::fill(hist.begin(), hist.end(), 0.0);
  const double width = hi - lo;
  const auto bins = static_cast<double>(hist.size());
  for (double v : t.values()) {
    std::size_t b = 0;
    if (width > 0.0) {
      b = static_cast<std::size_t>(std::floor((v - lo) / width * bins));
      b = std::min(b, hist.size() - 1);
    }
    hist[b] += 1.0;
  }
  const auto n = static_cast<double>(t.size());
  for (double& h : hist) h /= n;
}

}  // namespace

double cosine(const Tensor& a, const Tensor& b) {
  require_same_shape(a.shape(), b.shape(), "cosine");
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 && nb == 0.0) throw UndefinedMetricError("cosine of two zero tensors");
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

double mse(const Tensor& a, const Tensor& b) {
  require_same_shape(a.shape(), b.shape(), "mse");
  if (a.size() == 0) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc / static_cast<double>(a.size());
}

double psnr(const Tensor& a, const Tensor& b, double data_range) {
  check_range(data_range);
  const double m = mse(a, b);
  if (m == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(data_range * data_range / m);
}

double ssim(const Tensor& a, const Tensor& b, double data_range, std::size_t window) {
  require_same_shape(a.shape(), b.shape(), "ssim");
  check_range(data_range);
  const Shape& s = a.shape();
  if (window == 0 || window > s.height || window > s.width) {
    throw ConfigError("SSIM window " + std::to_string(window) + " larger than image " +
                      std::to_string(s.height) + "x" + std::to_string(s.width));
  }
  const double c1 = (0.01 * data_range) * (0.01 * data_range);
  const double c2 = (0.03 * data_range) * (0.03 * data_range);
  const auto np = static_cast<double>(window * window);
  const double cov_norm = np / (np - 1.0);
  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t c = 0; c < s.channels; ++c) {
    for (std::size_t i = 0; i + window <= s.height; ++i) {
      for (std::size_t j = 0; j + window <= s.width; ++j) {
        double sa = 0.0, sb = 0.0, saa = 0.0, sbb = 0.0, sab = 0.0;
        for (std::size_t u = 0; u < window; ++u) {
          for (std::size_t v = 0; v < window; ++v) {
            const double x = a.at(c, i + u, j + v);
            const double y = b.at(c, i + u, j + v);
            sa += x;
            sb += y;
            saa += x * x;
            sbb += y * y;
            sab += x * y;
          }
        }
        const double ma = sa / np;
        const double mb = sb / np;
        const double va = cov_norm * (saa / np - ma * ma);
        const double vb = cov_norm * (sbb / np - mb * mb);
        const double vab = cov_norm * (sab / np - ma * mb);
        total += ((2.0 * ma * mb + c1) * (2.0 * vab + c2)) /
                 ((ma * ma + mb * mb + c1) * (va + vb + c2));
        ++count;
      }
    }
  }
  return total / static_cast<double>(count);
}

double kl_divergence(const Tensor& a, const Tensor& b) {
  require_same_shape(a.shape(), b.shape(), "kl_divergence");
  if (a.size() == 0) return 0.0;
  const auto [amin, amax] = std::minmax_element(a.values().begin(), a.values().end());
  const auto [bmin, bmax] = std::minmax_element(b.values().begin(), b.values().end());
  const double lo = std::min(*amin, *bmin);
  const double hi = std::max(*amax, *bmax);
  std::vector<double> p(kKlBins);
  std::vector<double> q(kKlBins);
  histogram(a, lo, hi, p);
  histogram(b, lo, hi, q);
  const double norm = 1.0 + static_cast<double>(kKlBins) * kKlEpsilon;
  double kl = 0.0;
  for (std::size_t k = 0; k < kKlBins; ++k) {
    const double pk = (p[k] + kKlEpsilon) / norm;
    const double qk = (q[k] + kKlEpsilon) / norm;
    kl += pk * std::log(pk / qk);
  }
  return std::max(kl, 0.0);
}

double value_range(const Tensor& t) {
  if (t.size() == 0) return 1.0;
  const auto [lo, hi] = std::minmax_element(t.values().begin(), t.values().end());
  const double r = *hi - *lo;
  return r > 0.0 ? r : 1.0;
}

MetricReport compare(const Tensor& reference, const Tensor& candidate,
                     std::optional<double> data_range) {
  const double range = data_range.value_or(value_range(reference));
  MetricReport r;
  r.cosine = cosine(reference, candidate);
  r.mse = mse(reference, candidate);
  r.psnr_db = psnr(reference, candidate, range);
  r.ssim = ssim(reference, candidate, range);
  r.kl = kl_divergence(reference, candidate);
  return r;
}

}  // namespace pdn
