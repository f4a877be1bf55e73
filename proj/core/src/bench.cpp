// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "pdn/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <sstream>

#include "pdn/denoise.hpp"
#include "pdn/errors.hpp"
#include "pdn/he/backend.hpp"
#include "pdn/random.hpp"
#include "pdn/sampler/embedding.hpp"
#include "pdn/sampler/sampling.hpp"
#include "pdn/sparse.hpp"
#include "pdn/timing.hpp"

namespace pdn {
namespace {

struct StepInputs {
  Tensor x;
  Tensor e;
  Tensor noise;
  StepCoefficients c;
};

StepInputs make_inputs(const BenchConfig& cfg) {
  sampler::SampleConfig sc;
  sc.shape = cfg.shape;
  sc.model = sampler::predictor_for(cfg.shape);
  sc.steps = cfg.sampling_steps;
  sc.eta = cfg.eta;
  sc.seed = cfg.seed;
  const Schedule schedule = make_schedule(sc.steps, sc.eta, sc.num_train_steps);
  const sampler::ToyPredictor model(sc.model);
  const auto cond = sampler::embed_prompt(sc.prompt, sc.embed_seed);
  GaussianSource noise_source(sampler::step_noise_seed(sc.seed));
  Tensor x = sampler::initial_latent(sc);
  // Walk the plaintext chain up to the timed step.
  for (int k = 0;; ++k) {
    const auto ks = static_cast<std::size_t>(k);
    Tensor e = model.predict(x, cond, schedule.timesteps[ks]);
    Tensor noise = noise_source.draw(sc.shape);
    if (k == cfg.step) return {std::move(x), std::move(e), std::move(noise), schedule.steps[ks]};
    x = apply_affine(x, denoise_factors(e, schedule.steps[ks], noise));
  }
}

double max_abs_diff(const Tensor& a, const Tensor& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Encodes a multiplier at the scale of the prime the following rescale
// drops, so the ciphertext returns to its previous scale.
he::Ciphertext scale_by(const he::HeBackend& be, const he::Ciphertext& ct, double k) {
  const he::Plaintext pt = be.encode_constant(k, be.prime_at(ct.level), ct.level);
  return be.rescale(be.multiply_plain(ct, pt));
}

he::Ciphertext add_values(const he::HeBackend& be, const he::Ciphertext& ct,
                          std::span<const double> v) {
  return be.add_plain(ct, be.encode(v, ct.scale, ct.level));
}

BenchRow run_enc(const StepInputs& in, const he::HeBackend& be, const he::KeyPair& keys,
                 Prng& rng, const Tensor& reference) {
  const double delta = be.params().scale;
  const double dir = in.c.direction();
  const double inv_sqrt_c2 = 1.0 / std::sqrt(in.c.c2);
  const double sqrt_c3 = std::sqrt(in.c.c3);
  Tensor out(in.x.shape());
  Stopwatch watch;
  for (std::size_t i = 0; i < in.x.size(); ++i) {
    const double xi = in.x[i];
    he::Ciphertext ct =
        be.encrypt_symmetric(keys.secret_key, be.encode({&xi, 1}, delta, be.top_level()), rng);
    // pred_x0 = (x - c1 e) / sqrt(c2)
    const double shift = -in.c.c1 * in.e[i];
    ct = add_values(be, ct, {&shift, 1});
    ct = scale_by(be, ct, inv_sqrt_c2);
    // x_prev = sqrt(c3) pred_x0 + dir e + c4 noise
    ct = scale_by(be, ct, sqrt_c3);
    const double dir_term = dir * in.e[i];
    ct = add_values(be, ct, {&dir_term, 1});
    const double noise_term = in.c.c4 * in.noise[i];
    ct = add_values(be, ct, {&noise_term, 1});
    out[i] = be.decode(be.decrypt(keys.secret_key, ct))[0];
  }
  BenchRow row;
  row.variant = "Enc";
  row.seconds = watch.seconds();
  row.ciphertexts = in.x.size();
  row.encrypted_values = in.x.size();
  row.max_abs_error = max_abs_diff(out, reference);
  return row;
}

BenchRow run_enc_opt(const StepInputs& in, const he::HeBackend& be, const he::KeyPair& keys,
                     Prng& rng, const Tensor& reference) {
  const Shape& s = in.x.shape();
  const double delta = be.params().scale;
  Tensor out(s);
  std::vector<double> column(s.channels);
  std::vector<double> add_column(s.channels);
  Stopwatch watch;
  const AffineStep step = denoise_factors(in.e, in.c, in.noise);
  for (std::size_t p = 0; p < s.plane(); ++p) {
    for (std::size_t ch = 0; ch < s.channels; ++ch) {
      column[ch] = in.x[ch * s.plane() + p];
      add_column[ch] = step.add_part[ch * s.plane() + p];
    }
    he::Ciphertext ct =
        be.encrypt_symmetric(keys.secret_key, be.encode(column, delta, be.top_level()), rng);
    ct = scale_by(be, ct, step.factor);
    ct = add_values(be, ct, add_column);
    const auto slots = be.decode(be.decrypt(keys.secret_key, ct));
    for (std::size_t ch = 0; ch < s.channels; ++ch) out[ch * s.plane() + p] = slots[ch];
  }
  BenchRow row;
  row.variant = "Enc_opt";
  row.seconds = watch.seconds();
  row.ciphertexts = s.plane();
  row.encrypted_values = in.x.size();
  row.max_abs_error = max_abs_diff(out, reference);
  return row;
}

BenchRow run_sparse(const BenchConfig& cfg, const StepInputs& in, const he::HeBackend& be,
                    const he::KeyPair& keys, Prng& rng, const Tensor& reference,
                    double& sparsity) {
  Stopwatch watch;
  const CostMatrix cost = compute_cost(cfg.cost, in.x);
  const RemovalResult removal = remove_points_fast(in.x, cost, cfg.threshold);
  const SplitPair parts = split(in.x, removal);
  const double split_seconds = watch.seconds();
  const EncCooTensor y = encrypt_coo(to_coo(parts.y), be, keys.secret_key, rng);
  const HybridState next =
      denoise_encrypted(y, parts.z, denoise_factors(in.e, in.c, in.noise), be);
  const Tensor out = merge(decrypt_coo(next.y, be, keys.secret_key), next.z);
  BenchRow row;
  row.variant = "Sparse";
  row.seconds = watch.seconds();
  row.split_seconds = split_seconds;
  row.ciphertexts = y.packed.size();
  row.encrypted_values = y.count();
  row.max_abs_error = max_abs_diff(out, reference);
  sparsity = 1.0 - static_cast<double>(y.count()) / static_cast<double>(in.x.size());
  return row;
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

}  // namespace

double BenchResult::median_seconds(const std::string& variant) const {
  std::vector<double> t;
  for (const auto& r : rows) {
    if (r.variant == variant) t.push_back(r.seconds);
  }
  if (t.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(t.begin(), t.end());
  const std::size_t m = t.size() / 2;
  return t.size() % 2 == 1 ? t[m] : 0.5 * (t[m - 1] + t[m]);
}

BenchResult run_bench(const BenchConfig& config) {
  if (config.repeats < 1) throw ConfigError("repeats must be >= 1");
  if (config.step < 0 || config.step >= config.sampling_steps) {
    throw ConfigError("step must lie in [0, sampling_steps)");
  }
  if (!(config.threshold >= 0.0 && config.threshold < 1.0)) {
    throw ConfigError("threshold must lie in [0, 1)");
  }
  const StepInputs in = make_inputs(config);
  const auto be = he::make_backend(he::BackendKind::kCkksLite, config.he_params);
  const he::KeyPair keys = be->keygen(derive_seed(config.seed, Stream::kEncryption));
  Prng rng(derive_seed(config.seed, 0xbe7c));

  BenchResult result;
  result.config = config;
  for (int r = 0; r < config.repeats; ++r) {
    BenchRow plain;
    plain.variant = "Plain";
    Stopwatch watch;
    const Tensor reference = denoise_plain(in.x, in.e, in.c, in.noise);
    plain.seconds = watch.seconds();
    std::vector<BenchRow> batch{plain};
    batch.push_back(run_sparse(config, in, *be, keys, rng, reference, result.sparsity));
    if (config.run_enc_opt) batch.push_back(run_enc_opt(in, *be, keys, rng, reference));
    if (config.run_enc) batch.push_back(run_enc(in, *be, keys, rng, reference));
    for (auto& row : batch) {
      row.repeat = r;
      result.rows.push_back(std::move(row));
    }
  }
  return result;
}

std::string bench_csv(const BenchResult& result) {
  std::ostringstream os;
  os << "variant,repeat,seconds,split_seconds,ciphertexts,encrypted_values,max_abs_error\n";
  for (const auto& r : result.rows) {
    os << r.variant << ',' << r.repeat << ',' << fmt("%.9g", r.seconds) << ','
       << fmt("%.9g", r.split_seconds) << ',' << r.ciphertexts << ',' << r.encrypted_values
       << ',' << fmt("%.6g", r.max_abs_error) << '\n';
  }
  return os.str();
}

std::string bench_table(const BenchResult& result) {
  std::ostringstream os;
  os << "shape " << to_string(result.config.shape) << "  threshold "
     << fmt("%g", result.config.threshold) << "  sparsity " << fmt("%.4f", result.sparsity)
     << "  repeats " << result.config.repeats << '\n';
  char line[160];
  std::snprintf(line, sizeof line, "%-8s %14s %12s %12s %10s\n", "variant", "median_s",
                "ciphertexts", "values", "max_err");
  os << line;
  for (const char* v : {"Plain", "Enc", "Enc_opt", "Sparse"}) {
    const auto it = std::find_if(result.rows.begin(), result.rows.end(),
                                 [v](const BenchRow& r) { return r.variant == v; });
    if (it == result.rows.end()) continue;
    std::snprintf(line, sizeof line, "%-8s %14.6f %12zu %12zu %10.3g\n", v,
                  result.median_seconds(v), it->ciphertexts, it->encrypted_values,
                  it->max_abs_error);
    os << line;
  }
  const double sparse = result.median_seconds("Sparse");
  for (const char* v : {"Enc", "Enc_opt"}) {
    const double t = result.median_seconds(v);
    if (!std::isnan(t)) os << v << "/Sparse " << fmt("%.2f", t / sparse) << "x\n";
  }
  const double enc = result.median_seconds("Enc");
  const double opt = result.median_seconds("Enc_opt");
  if (!std::isnan(enc) && !std::isnan(opt)) os << "Enc/Enc_opt " << fmt("%.2f", enc / opt) << "x\n";
  return os.str();
}

}  // namespace pdn
