// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "pdn/sweep.hpp"

#include <cstdio>
#include <sstream>

#include "pdn/errors.hpp"
#include "pdn/metrics.hpp"
#include "pdn/sampler/sampling.hpp"
#include "pdn/timing.hpp"

namespace pdn {
namespace {

// cos against an all-zero part is 0: nothing of X is in it.
double cos_or_zero(const Tensor& x, const Tensor& part) {
  for (double v : part.values()) {
    if (v != 0.0) return cosine(x, part);
  }
  return 0.0;
}

}  // namespace

LeakageSample measure_leakage(const Tensor& x, double threshold, CostFunction cost) {
  LeakageSample s;
  s.threshold = threshold;
  Stopwatch watch;
  const RemovalResult removal = remove_points_fast(x, compute_cost(cost, x), threshold);
  const SplitPair parts = split(x, removal);
  s.seconds = watch.seconds();
  s.sparsity = removed_fraction(removal, x.shape());
  s.cos_xy = cos_or_zero(x, parts.y);
  s.cos_xz = cos_or_zero(x, parts.z);
  s.kl_xy = kl_divergence(x, parts.y);
  s.kl_xz = kl_divergence(x, parts.z);
  return s;
}

std::vector<Tensor> sampled_latents(const SweepConfig& config) {
  if (config.samples < 1) throw ConfigError("samples must be >= 1");
  std::vector<Tensor> out;
  for (int i = 0; i < config.samples; ++i) {
    sampler::SampleConfig sc;
    sc.shape = config.shape;
    sc.model = sampler::predictor_for(config.shape);
    sc.steps = config.sampling_steps;
    sc.seed = config.seed + static_cast<std::uint64_t>(i);
    out.push_back(sampler::sample_plain(sc));
  }
  return out;
}

SweepResult run_sweep(const SweepConfig& config) {
  if (config.thresholds.empty()) throw ConfigError("no thresholds given");
  for (double t : config.thresholds) {
    if (!(t > 0.0 && t < 1.0)) throw ConfigError("sweep thresholds must lie in (0, 1)");
  }
  const auto latents = sampled_latents(config);
  SweepResult result;
  for (double t : config.thresholds) {
    SweepRow row;
    row.threshold = t;
    for (std::size_t i = 0; i < latents.size(); ++i) {
      LeakageSample s = measure_leakage(latents[i], t, config.cost);
      s.seed = config.seed + i;
      row.sparsity += s.sparsity;
      row.cos_xy += s.cos_xy;
      row.cos_xz += s.cos_xz;
      row.kl_xy += s.kl_xy;
      row.kl_xz += s.kl_xz;
      row.seconds += s.seconds;
      result.samples.push_back(s);
    }
    const auto n = static_cast<double>(latents.size());
    row.sparsity /= n;
    row.cos_xy /= n;
    row.cos_xz /= n;
    row.kl_xy /= n;
    row.kl_xz /= n;
    row.seconds /= n;
    result.rows.push_back(row);
  }
  return result;
}

std::string sweep_csv(const SweepResult& result) {
  std::ostringstream os;
  os << "threshold,sparsity,cos_xy,cos_xz,kl_xy,kl_xz,time\n";
  char line[256];
  for (const auto& r : result.rows) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.9g\n", r.threshold,
                  r.sparsity, r.cos_xy, r.cos_xz, r.kl_xy, r.kl_xz, r.seconds);
    os << line;
  }
  return os.str();
}

}  // namespace pdn
