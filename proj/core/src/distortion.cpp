// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "pdn/distortion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pdn/errors.hpp"

namespace pdn {
namespace {

// Symmetric padding: ... 2 1 0 | 0 1 2 ... n-1 | n-1 n-2 ...
// Periodic with period 2n, so it stays in range for kernels wider than n.
std::size_t mirror(long i, long n) {
  const long period = 2 * n;
  long m = i % period;
  if (m < 0) m += period;
  return static_cast<std::size_t>(m < n ? m : period - 1 - m);
}

// Correlates one H x W plane with a k x k kernel (odd k), mirror-padded.
std::vector<double> filter_plane(const double* plane, std::size_t h, std::size_t w,
                                 const double* kernel, long k) {
  std::vector<double> out(h * w, 0.0);
  const long r = k / 2;
  const long hl = static_cast<long>(h);
  const long wl = static_cast<long>(w);
  for (long i = 0; i < hl; ++i) {
    for (long j = 0; j < wl; ++j) {
      double acc = 0.0;
      for (long a = 0; a < k; ++a) {
        const std::size_t row = mirror(i + a - r, hl) * w;
        for (long b = 0; b < k; ++b) {
          acc += kernel[a * k + b] * plane[row + mirror(j + b - r, wl)];
        }
      }
      out[static_cast<std::size_t>(i) * w + static_cast<std::size_t>(j)] = acc;
    }
  }
  return out;
}

std::vector<double> box_kernel(long k) {
  return std::vector<double>(static_cast<std::size_t>(k * k), 1.0 / static_cast<double>(k * k));
}

void check_threshold(double threshold) {
  if (!(threshold >= 0.0 && threshold < 1.0)) {
    throw InputError("threshold must lie in [0, 1), got " + std::to_string(threshold));
  }
}

struct Prepared {
  Tensor d;
  double whole = 0.0;
  double budget = 0.0;
};

Prepared prepare(const Tensor& x, const CostMatrix& cost, double threshold) {
  check_threshold(threshold);
  if (!x.all_finite()) throw InputError("latent contains NaN or Inf");
  DistortionMatrix dm = distortion_matrix(x, cost);
  Prepared p;
  p.whole = whole_distortion(dm);
  p.budget = threshold * p.whole;
  p.d = std::move(dm.d);
  return p;
}

}  // namespace

CostFunction parse_cost_function(std::string_view name) {
  if (name == "hill") return CostFunction::kHill;
  if (name == "uniform") return CostFunction::kUniform;
  throw ConfigError("unknown cost function '" + std::string(name) + "' (expected hill or uniform)");
}

std::string_view to_string(CostFunction fn) {
  return fn == CostFunction::kHill ? "hill" : "uniform";
}

CostMatrix hill_cost(const Tensor& x) {
  if (!x.all_finite()) throw InputError("latent contains NaN or Inf");
  static const double kb[9] = {-1, 2, -1, 2, -4, 2, -1, 2, -1};
  static const std::vector<double> a3 = box_kernel(3);
  static const std::vector<double> a15 = box_kernel(15);
  const Shape& s = x.shape();
  CostMatrix cost{Tensor(s)};
  for (std::size_t c = 0; c < s.channels; ++c) {
    const double* plane = x.values().data() + c * s.plane();
    std::vector<double> residual = filter_plane(plane, s.height, s.width, kb, 3);
    for (double& v : residual) v = std::abs(v);
    std::vector<double> energy = filter_plane(residual.data(), s.height, s.width, a3.data(), 3);
    for (double& v : energy) {
      v = v > 0.0 ? std::clamp(1.0 / v, kMinCost, kMaxCost) : kMaxCost;
    }
    std::vector<double> rho = filter_plane(energy.data(), s.height, s.width, a15.data(), 15);
    double* out = cost.rho.values().data() + c * s.plane();
    for (std::size_t i = 0; i < rho.size(); ++i) out[i] = std::clamp(rho[i], kMinCost, kMaxCost);
  }
  return cost;
}

CostMatrix uniform_cost(const Tensor& x) { return CostMatrix{Tensor(x.shape(), 1.0)}; }

CostMatrix compute_cost(CostFunction fn, const Tensor& x) {
  return fn == CostFunction::kHill ? hill_cost(x) : uniform_cost(x);
}

DistortionMatrix distortion_matrix(const Tensor& x, const CostMatrix& cost) {
  require_same_shape(x.shape(), cost.rho.shape(), "distortion_matrix");
  DistortionMatrix dm{Tensor(x.shape())};
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double rho = cost.rho[i];
    if (!(rho >= 0.0) || !std::isfinite(rho)) throw InputError("cost must be finite and >= 0");
    dm.d[i] = rho * std::abs(x[i]);
  }
  return dm;
}

double whole_distortion(const DistortionMatrix& dm) {
  double total = 0.0;
  for (double v : dm.d.values()) total += v;
  return total;
}

RemovalResult remove_points_basic(const Tensor& x, const CostMatrix& cost, double threshold) {
  const Prepared p = prepare(x, cost, threshold);
  RemovalResult out;
  out.whole_distortion = p.whole;
  out.threshold = threshold;
  const std::size_t n = p.d.size();
  std::vector<bool> removed(n, false);
  for (std::size_t pass = 0; pass < n; ++pass) {
    std::size_t best = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (!removed[i] && (best == n || p.d[i] < p.d[best])) best = i;
    }
    if (best == n || out.spent_distortion + p.d[best] > p.budget) break;
    removed[best] = true;
    out.spent_distortion += p.d[best];
    out.removed_indices.push_back(best);
  }
  return out;
}

RemovalResult remove_points_fast(const Tensor& x, const CostMatrix& cost, double threshold) {
  const Prepared p = prepare(x, cost, threshold);
  RemovalResult out;
  out.whole_distortion = p.whole;
  out.threshold = threshold;
  const auto less = [&p](std::size_t a, std::size_t b) {
    return p.d[a] < p.d[b] || (p.d[a] == p.d[b] && a < b);
  };
  // Returns false once a candidate no longer fits: the greedy prefix ends.
  const auto take = [&](std::size_t i) {
    if (out.spent_distortion + p.d[i] > p.budget) return false;
    out.spent_distortion += p.d[i];
    out.removed_indices.push_back(i);
    return true;
  };

  std::vector<std::size_t> remaining(p.d.size());
  for (std::size_t i = 0; i < remaining.size(); ++i) remaining[i] = i;

  // Batch phase. Every point below dis_remain / remain_points fits together,
  // and the batch is a prefix of the (d, index) order, so walking it sorted
  // reproduces the basic removal sequence exactly.
  std::vector<std::size_t> batch;
  std::vector<std::size_t> rest;
  while (!remaining.empty()) {
    const double dis_remain = p.budget - out.spent_distortion;
    const double count = static_cast<double>(remaining.size());
    batch.clear();
    rest.clear();
    for (std::size_t i : remaining) (p.d[i] * count < dis_remain ? batch : rest).push_back(i);
    if (batch.empty()) break;
    std::sort(batch.begin(), batch.end(), less);
    for (std::size_t k = 0; k < batch.size(); ++k) {
      if (!take(batch[k])) return out;
    }
    remaining.swap(rest);
  }

  // Boundary phase: pull the next smallest chunk with a partial sort.
  auto first = remaining.begin();
  while (first != remaining.end()) {
    const auto left = static_cast<std::size_t>(remaining.end() - first);
    const auto chunk = static_cast<std::ptrdiff_t>(std::min(left, std::max<std::size_t>(64, left / 16)));
    std::partial_sort(first, first + chunk, remaining.end(), less);
    for (auto it = first; it != first + chunk; ++it) {
      if (!take(*it)) return out;
    }
    first += chunk;
  }
  return out;
}

SplitPair split(const Tensor& x, const RemovalResult& removal) {
  SplitPair pair{x, Tensor(x.shape())};
  for (std::size_t i : removal.removed_indices) {
    if (i >= x.size()) {
      throw InputError("removal index " + std::to_string(i) + " outside tensor of " +
                       std::to_string(x.size()) + " elements");
    }
    pair.z[i] = x[i];
    pair.y[i] = 0.0;
  }
  return pair;
}

double removed_fraction(const RemovalResult& removal, const Shape& shape) {
  if (shape.numel() == 0) return 0.0;
  return static_cast<double>(removal.removed_indices.size()) / static_cast<double>(shape.numel());
}

}  // namespace pdn
