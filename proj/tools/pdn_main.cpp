// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

// pdn: key generation, private sampling sessions, benchmarks, leakage
// sweeps and tensor metrics from the command line.
//
// Exit codes: 0 ok, 1 other failure, 2 configuration error,
// 3 protocol or session error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pdn/bench.hpp"
#include "pdn/denoise.hpp"
#include "pdn/errors.hpp"
#include "pdn/he/backend.hpp"
#include "pdn/he/serialize.hpp"
#include "pdn/metrics.hpp"
#include "pdn/random.hpp"
#include "pdn/sampler/sampling.hpp"
#include "pdn/session.hpp"
#include "pdn/sweep.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitProtocol = 3;

struct SampleOptions {
  int steps = 10;
  std::string size = "4x32x32";
  double threshold = 0.01;
  double eta = 0.0;
  std::uint64_t seed = 1;
  std::uint64_t embed_seed = 7;
  std::string prompt = pdn::sampler::SampleConfig{}.prompt;
  std::string backend = "ckks";
  std::uint32_t reencrypt_every = 1;
  std::string cost_fn = "hill";
  std::string transport = "in-process";
  std::string out = "pdn_out";
  double bandwidth_mbps = 10.0;
  bool compare_plain = false;
};

struct BenchOptions {
  std::string size = "4x32x32";
  double threshold = 0.01;
  std::string cost_fn = "hill";
  int steps = 10;
  int step = 0;
  double eta = 0.0;
  std::uint64_t seed = 1;
  int repeats = 1;
  bool skip_enc = false;
  bool skip_enc_opt = false;
  std::string out = "pdn_out";
};

struct SweepOptions {
  std::vector<double> thresholds{0.001, 0.01, 0.05, 0.1, 0.3};
  std::string size = "4x32x32";
  std::string cost_fn = "hill";
  int samples = 20;
  int steps = 10;
  std::uint64_t seed = 1;
  std::string out = "pdn_out";
};

struct KeygenOptions {
  std::uint64_t seed = 1;
  std::string out = "pdn_keys";
};

struct MetricsOptions {
  std::string reference;
  std::string candidate;
  std::string size = "4x32x32";
  std::optional<double> data_range;
};

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw pdn::ConfigError("cannot write " + path.string());
  out << text;
}

void write_bytes(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw pdn::ConfigError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

void write_latent(const fs::path& path, const pdn::Tensor& t) {
  std::vector<float> data(t.values().begin(), t.values().end());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw pdn::ConfigError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size() * sizeof(float)));
}

pdn::Tensor read_latent(const fs::path& path, const pdn::Shape& shape) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw pdn::ConfigError("cannot read " + path.string());
  const auto bytes = static_cast<std::size_t>(in.tellg());
  if (bytes != shape.numel() * sizeof(float)) {
    throw pdn::ConfigError(path.string() + " holds " + std::to_string(bytes) +
                           " bytes, expected " + std::to_string(shape.numel() * sizeof(float)) +
                           " for shape " + pdn::to_string(shape));
  }
  in.seekg(0);
  std::vector<float> data(shape.numel());
  in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(bytes));
  return pdn::Tensor(shape, std::vector<double>(data.begin(), data.end()));
}

fs::path prepare_out_dir(const std::string& dir) {
  fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw pdn::ConfigError("cannot create output directory " + dir + ": " + ec.message());
  return p;
}

// JSON has no infinity; PSNR of identical tensors is reported as "inf".
json real_or_inf(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

json metrics_json(const pdn::MetricReport& m) {
  return {{"cosine", m.cosine},
          {"mse", m.mse},
          {"psnr_db", real_or_inf(m.psnr_db)},
          {"ssim", m.ssim},
          {"kl", m.kl}};
}

json traffic_json(const pdn::wire::TrafficStats& t) {
  json sent = json::object();
  json received = json::object();
  for (int k = 1; k <= static_cast<int>(pdn::wire::kMessageKindCount); ++k) {
    const auto kind = static_cast<pdn::wire::MessageKind>(k);
    sent[std::string(pdn::wire::to_string(kind))] = t.sent_of(kind);
    received[std::string(pdn::wire::to_string(kind))] = t.received_of(kind);
  }
  return {{"messages_sent", sent},
          {"messages_received", received},
          {"bytes_sent", t.bytes_sent},
          {"bytes_received", t.bytes_received}};
}

json report_json(const pdn::RunReport& r, double bandwidth_mbps) {
  const auto& c = r.config;
  json iterations = json::array();
  for (const auto& it : r.iterations) {
    iterations.push_back({{"iteration", it.iteration},
                          {"sparsity", it.sparsity},
                          {"encrypted_values", it.encrypted_values},
                          {"client_forward_time", it.client_forward_time},
                          {"server_forward_time", it.server_forward_time},
                          {"encrypt_time", it.encrypt_time},
                          {"denoise_time", it.denoise_time},
                          {"decrypt_time", it.decrypt_time},
                          {"bytes_up", it.bytes_up},
                          {"bytes_down", it.bytes_down},
                          {"reencrypted", it.reencrypted},
                          {"forced", it.forced},
                          {"level_after", it.level_after}});
  }
  const auto& t = r.totals;
  const double wire_bytes =
      static_cast<double>(r.traffic.bytes_sent + r.traffic.bytes_received);
  return {
      {"config",
       {{"prompt", c.sample.prompt},
        {"steps", c.sample.steps},
        {"eta", c.sample.eta},
        {"seed", c.sample.seed},
        {"shape", pdn::to_string(c.sample.shape)},
        {"threshold", c.threshold},
        {"reencrypt_every", c.reencrypt_every},
        {"cost_fn", std::string(pdn::to_string(c.cost))},
        {"backend", std::string(pdn::he::to_string(c.backend))},
        {"transport", std::string(pdn::wire::to_string(r.transport))},
        {"he_params", c.he_params.to_text()}}},
      {"complete", r.complete},
      {"wall_time", r.wall_time},
      {"iterations", iterations},
      {"totals",
       {{"client_forward_time", t.client_forward_time},
        {"server_forward_time", t.server_forward_time},
        {"encrypt_time", t.encrypt_time},
        {"denoise_time", t.denoise_time},
        {"decrypt_time", t.decrypt_time},
        {"bytes_up", t.bytes_up},
        {"bytes_down", t.bytes_down},
        {"reencryptions", t.reencryptions},
        {"forced_reencryptions", t.forced_reencryptions}}},
      {"control_bytes_up", r.control_bytes_up},
      {"control_bytes_down", r.control_bytes_down},
      {"traffic", traffic_json(r.traffic)},
      {"bandwidth_mbps", bandwidth_mbps},
      {"estimated_transfer_seconds", wire_bytes / (bandwidth_mbps * 1e6)},
  };
}

pdn::sampler::ClientConfig client_config(const SampleOptions& o) {
  pdn::sampler::ClientConfig c;
  c.sample.prompt = o.prompt;
  c.sample.steps = o.steps;
  c.sample.eta = o.eta;
  c.sample.seed = o.seed;
  c.sample.embed_seed = o.embed_seed;
  c.sample.shape = pdn::parse_shape(o.size);
  c.sample.model = pdn::sampler::predictor_for(c.sample.shape);
  c.threshold = o.threshold;
  c.reencrypt_every = o.reencrypt_every;
  c.cost = pdn::parse_cost_function(o.cost_fn);
  c.backend = pdn::he::parse_backend_kind(o.backend);
  if (o.steps < 1) throw pdn::ConfigError("--steps must be >= 1");
  if (o.prompt.empty()) throw pdn::ConfigError("--prompt must not be empty");
  try {
    (void)pdn::make_schedule(o.steps, o.eta, c.sample.num_train_steps);
  } catch (const pdn::ScheduleError& e) {
    throw pdn::ConfigError(e.what());
  }
  if (!(o.bandwidth_mbps > 0.0)) throw pdn::ConfigError("--bandwidth must be positive");
  return c;
}

int run_sample(const SampleOptions& o) {
  const auto config = client_config(o);
  const auto transport = pdn::wire::parse_transport_kind(o.transport);
  const fs::path dir = prepare_out_dir(o.out);
  pdn::PrivateSample result;
  try {
    result = pdn::run_session(config, transport);
  } catch (const pdn::SessionAborted& e) {
    write_file(dir / "report.json", report_json(e.partial(), o.bandwidth_mbps).dump(2) + "\n");
    throw;
  }
  json report = report_json(result.report, o.bandwidth_mbps);
  if (o.compare_plain) {
    const pdn::Tensor plain = pdn::sampler::sample_plain(config.sample);
    report["versus_plain"] = metrics_json(pdn::compare(plain, result.latent));
  }
  write_latent(dir / "latent.f32", result.latent);
  write_file(dir / "report.json", report.dump(2) + "\n");
  write_file(dir / "iterations.csv", pdn::report_csv(result.report));
  const auto& t = result.report.totals;
  std::printf("steps %d  shape %s  backend %s  transport %s\n", config.sample.steps,
              pdn::to_string(config.sample.shape).c_str(),
              std::string(pdn::he::to_string(config.backend)).c_str(),
              std::string(pdn::wire::to_string(transport)).c_str());
  std::printf("wall %.3fs  encrypt %.3fs  denoise %.3fs  decrypt %.3fs  up %llu B  down %llu B\n",
              result.report.wall_time, t.encrypt_time, t.denoise_time, t.decrypt_time,
              static_cast<unsigned long long>(result.report.traffic.bytes_sent),
              static_cast<unsigned long long>(result.report.traffic.bytes_received));
  if (report.contains("versus_plain")) {
    std::printf("versus plain: cosine %.6f  mse %.3g\n",
                report["versus_plain"]["cosine"].get<double>(),
                report["versus_plain"]["mse"].get<double>());
  }
  std::printf("wrote %s\n", (dir / "latent.f32").string().c_str());
  return kExitOk;
}

int run_bench_cmd(const BenchOptions& o) {
  pdn::BenchConfig c;
  c.shape = pdn::parse_shape(o.size);
  c.threshold = o.threshold;
  c.cost = pdn::parse_cost_function(o.cost_fn);
  c.sampling_steps = o.steps;
  c.step = o.step;
  c.eta = o.eta;
  c.seed = o.seed;
  c.repeats = o.repeats;
  c.run_enc = !o.skip_enc;
  c.run_enc_opt = !o.skip_enc_opt;
  const fs::path dir = prepare_out_dir(o.out);
  const pdn::BenchResult result = pdn::run_bench(c);
  write_file(dir / "bench.csv", pdn::bench_csv(result));
  std::cout << pdn::bench_table(result);
  return kExitOk;
}

int run_sweep_cmd(const SweepOptions& o) {
  pdn::SweepConfig c;
  c.thresholds = o.thresholds;
  c.shape = pdn::parse_shape(o.size);
  c.cost = pdn::parse_cost_function(o.cost_fn);
  c.samples = o.samples;
  c.sampling_steps = o.steps;
  c.seed = o.seed;
  const fs::path dir = prepare_out_dir(o.out);
  const pdn::SweepResult result = pdn::run_sweep(c);
  const std::string csv = pdn::sweep_csv(result);
  write_file(dir / "sweep.csv", csv);
  std::cout << csv;
  return kExitOk;
}

int run_keygen(const KeygenOptions& o) {
  const auto params = pdn::he::HeParams::defaults();
  const auto backend = pdn::he::make_backend(pdn::he::BackendKind::kCkksLite, params);
  const auto keys = backend->keygen(o.seed);
  const fs::path dir = prepare_out_dir(o.out);
  write_bytes(dir / "secret_key.hedf", pdn::he::serialize(keys.secret_key));
  write_bytes(dir / "public_key.hedf", pdn::he::serialize(keys.public_key));
  write_file(dir / "params.txt", params.to_text());
  std::printf("wrote %s/{secret_key.hedf,public_key.hedf,params.txt}\n", dir.string().c_str());
  return kExitOk;
}

int run_metrics(const MetricsOptions& o) {
  const pdn::Shape shape = pdn::parse_shape(o.size);
  const pdn::Tensor a = read_latent(o.reference, shape);
  const pdn::Tensor b = read_latent(o.candidate, shape);
  std::cout << metrics_json(pdn::compare(a, b, o.data_range)).dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pdn: partially encrypted denoising sampler"};
  app.require_subcommand(1);

  SampleOptions sample;
  auto* sample_cmd = app.add_subcommand("sample", "Run one private sampling session");
  sample_cmd->add_option("--steps", sample.steps, "Sampling steps")->capture_default_str();
  sample_cmd->add_option("--size", sample.size, "Latent shape CxHxW")->capture_default_str();
  sample_cmd->add_option("--threshold", sample.threshold, "Point-removal threshold in [0,1)")
      ->capture_default_str();
  sample_cmd->add_option("--eta", sample.eta, "Stochasticity of the sampler")
      ->capture_default_str();
  sample_cmd->add_option("--seed", sample.seed, "Run seed")->capture_default_str();
  sample_cmd->add_option("--embed-seed", sample.embed_seed, "Prompt embedding seed (client only)")
      ->capture_default_str();
  sample_cmd->add_option("--prompt", sample.prompt, "Prompt text")->capture_default_str();
  sample_cmd->add_option("--backend", sample.backend, "ckks or mock")->capture_default_str();
  sample_cmd->add_option("--reencrypt-every", sample.reencrypt_every,
                         "Re-encrypt the image every k iterations")
      ->capture_default_str();
  sample_cmd->add_option("--cost-fn", sample.cost_fn, "hill or uniform")->capture_default_str();
  sample_cmd->add_option("--transport", sample.transport, "in-process or socket")
      ->capture_default_str();
  sample_cmd->add_option("--out", sample.out, "Output directory")->capture_default_str();
  sample_cmd->add_option("--bandwidth", sample.bandwidth_mbps,
                         "Link speed in MB/s for the transfer-time estimate")
      ->capture_default_str();
  sample_cmd->add_flag("--compare-plain", sample.compare_plain,
                       "Also run the plaintext sampler and report metrics against it");

  BenchOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "Time one denoise step: Plain, Enc, Enc_opt, Sparse");
  bench_cmd->add_option("--size", bench.size, "Latent shape CxHxW")->capture_default_str();
  bench_cmd->add_option("--threshold", bench.threshold, "Point-removal threshold")
      ->capture_default_str();
  bench_cmd->add_option("--cost-fn", bench.cost_fn, "hill or uniform")->capture_default_str();
  bench_cmd->add_option("--steps", bench.steps, "Sampling steps of the schedule")
      ->capture_default_str();
  bench_cmd->add_option("--step", bench.step, "Which step to time")->capture_default_str();
  bench_cmd->add_option("--eta", bench.eta, "Stochasticity of the sampler")->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed, "Seed")->capture_default_str();
  bench_cmd->add_option("--repeats", bench.repeats, "Timed repetitions")->capture_default_str();
  bench_cmd->add_flag("--skip-enc", bench.skip_enc, "Skip the per-element Enc variant");
  bench_cmd->add_flag("--skip-enc-opt", bench.skip_enc_opt, "Skip the Enc_opt variant");
  bench_cmd->add_option("--out", bench.out, "Output directory")->capture_default_str();

  SweepOptions sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Leakage and sparsity across thresholds");
  sweep_cmd->add_option("--thresholds", sweep.thresholds, "Thresholds in (0,1)")
      ->delimiter(',')
      ->capture_default_str();
  sweep_cmd->add_option("--size", sweep.size, "Latent shape CxHxW")->capture_default_str();
  sweep_cmd->add_option("--cost-fn", sweep.cost_fn, "hill or uniform")->capture_default_str();
  sweep_cmd->add_option("--samples", sweep.samples, "Sampled latents per threshold")
      ->capture_default_str();
  sweep_cmd->add_option("--steps", sweep.steps, "Sampling steps per latent")
      ->capture_default_str();
  sweep_cmd->add_option("--seed", sweep.seed, "First seed")->capture_default_str();
  sweep_cmd->add_option("--out", sweep.out, "Output directory")->capture_default_str();

  KeygenOptions keygen;
  auto* keygen_cmd = app.add_subcommand("keygen", "Generate and serialize a key pair");
  keygen_cmd->add_option("--seed", keygen.seed, "Key seed")->capture_default_str();
  keygen_cmd->add_option("--out", keygen.out, "Output directory")->capture_default_str();

  MetricsOptions metrics;
  auto* metrics_cmd = app.add_subcommand("metrics", "Compare two f32 latent files");
  metrics_cmd->add_option("reference", metrics.reference, "Reference latent (.f32)")->required();
  metrics_cmd->add_option("candidate", metrics.candidate, "Candidate latent (.f32)")->required();
  metrics_cmd->add_option("--size", metrics.size, "Latent shape CxHxW")->capture_default_str();
  metrics_cmd->add_option("--data-range", metrics.data_range,
                          "Data range for PSNR/SSIM (default: reference max - min)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*sample_cmd) return run_sample(sample);
    if (*bench_cmd) return run_bench_cmd(bench);
    if (*sweep_cmd) return run_sweep_cmd(sweep);
    if (*keygen_cmd) return run_keygen(keygen);
    if (*metrics_cmd) return run_metrics(metrics);
  } catch (const pdn::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const pdn::InputError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const pdn::ScheduleError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const pdn::ProtocolError& e) {
    std::cerr << "protocol error: " << e.what() << '\n';
    return kExitProtocol;
  } catch (const pdn::SessionError& e) {
    std::cerr << "session error: " << e.what() << '\n';
    return kExitProtocol;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}
