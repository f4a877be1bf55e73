// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "pdn/sampler/client_role.hpp"

#include <string>

#include "pdn/denoise.hpp"
#include "pdn/errors.hpp"
#include "pdn/random.hpp"
#include "pdn/sampler/embedding.hpp"
#include "pdn/sampler/payloads.hpp"
#include "pdn/sparse.hpp"
#include "pdn/timing.hpp"

namespace pdn::sampler {

ClientRole::ClientRole(ClientConfig config) : config_(std::move(config)) {
  validate(config_.sample);
  if (config_.reencrypt_every == 0) throw ConfigError("reencrypt_every must be >= 1");
  if (!(config_.threshold >= 0.0 && config_.threshold < 1.0)) {
    throw ConfigError("threshold must lie in [0, 1)");
  }
}

Tensor ClientRole::run(wire::Channel& channel) {
  const SampleConfig& sc = config_.sample;
  const Schedule schedule = make_schedule(sc.steps, sc.eta, sc.num_train_steps);
  const ClientLayer layer(sc.model);
  const auto backend = he::make_backend(config_.backend, config_.he_params);
  const std::uint64_t enc_seed = derive_seed(sc.seed, Stream::kEncryption);
  const he::KeyPair keys = backend->keygen(enc_seed);
  Prng enc_rng(derive_seed(enc_seed, 1));
  iterations_.clear();

  ScheduleInfo info;
  info.steps = static_cast<std::uint32_t>(sc.steps);
  info.eta = sc.eta;
  info.num_train_steps = static_cast<std::uint32_t>(sc.num_train_steps);
  info.shape = sc.shape;
  info.reencrypt_every = config_.reencrypt_every;
  info.backend = config_.backend;
  info.noise_seed = step_noise_seed(sc.seed);
  info.he_params = config_.he_params;
  info.model = sc.model;
  channel.send(encode_schedule_info(info));
  channel.send(encode_condition(embed_prompt(sc.prompt, sc.embed_seed)));
  expect_ack(channel.receive());

  Tensor x = initial_latent(sc);
  bool server_requested = false;
  for (int i = 0; i < sc.steps; ++i) {
    ClientIteration rec;
    const std::uint64_t up0 = channel.stats().bytes_sent;
    const std::uint64_t down0 = channel.stats().bytes_received;
    const bool scheduled = static_cast<std::uint32_t>(i) % config_.reencrypt_every == 0;
    rec.reencrypted = scheduled || server_requested;
    rec.forced = !scheduled && server_requested;

    Stopwatch watch;
    ActivationPayload act;
    act.iteration = static_cast<std::uint32_t>(i);
    act.reencrypted = rec.reencrypted;
    act.data = layer.forward(x, schedule.timesteps[static_cast<std::size_t>(i)]);
    rec.forward_time = watch.seconds();
    channel.send(encode_activation(act));

    if (rec.reencrypted) {
      watch.restart();
      const CostMatrix cost = compute_cost(config_.cost, x);
      const RemovalResult removal = remove_points_fast(x, cost, config_.threshold);
      SplitPair parts = split(x, removal);
      EncImagePayload img;
      img.iteration = act.iteration;
      img.y = encrypt_coo(to_coo(parts.y), *backend, keys.secret_key, enc_rng);
      img.z = std::move(parts.z);
      rec.encrypt_time = watch.seconds();
      channel.send(encode_enc_image(img));
    }

    const EncImagePayload down = decode_enc_image(channel.receive(), config_.he_params);
    if (down.iteration != act.iteration) {
      throw ProtocolError("EncImage for iteration " + std::to_string(down.iteration) +
                          " while expecting " + std::to_string(act.iteration));
    }
    watch.restart();
    x = merge(decrypt_coo(down.y, *backend, keys.secret_key), down.z);
    rec.decrypt_time = watch.seconds();
    server_requested = down.reencrypt_required();

    rec.encrypted_values = down.y.count();
    rec.sparsity = 1.0 - static_cast<double>(down.y.count()) / static_cast<double>(x.size());
    rec.bytes_up = channel.stats().bytes_sent - up0;
    rec.bytes_down = channel.stats().bytes_received - down0;
    iterations_.push_back(rec);
  }
  channel.send(make_ack());
  return x;
}

}  // namespace pdn::sampler
