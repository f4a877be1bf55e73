// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "pdn/sampler/server_role.hpp"

#include <algorithm>
#include <optional>
#include <string>

#include "pdn/denoise.hpp"
#include "pdn/errors.hpp"
#include "pdn/he/backend.hpp"
#include "pdn/random.hpp"
#include "pdn/sampler/payloads.hpp"
#include "pdn/sampler/predictor.hpp"
#include "pdn/timing.hpp"

namespace pdn::sampler {

void ServerRole::run(wire::Channel& channel) {
  const ScheduleInfo info = decode_schedule_info(channel.receive());
  const ConditionTensor cond = decode_condition(channel.receive());
  channel.send(make_ack());

  const Schedule schedule =
      make_schedule(static_cast<int>(info.steps), info.eta, static_cast<int>(info.num_train_steps));
  const ServerModel model(info.model);
  const auto backend = he::make_backend(info.backend, info.he_params);
  GaussianSource noise_source(info.noise_seed);
  const Shape hidden_shape{info.model.hidden_channels, info.shape.height, info.shape.width};
  iterations_.clear();

  std::optional<HybridState> state;
  for (std::uint32_t i = 0; i < info.steps; ++i) {
    ServerIteration rec;
    const ActivationPayload act = decode_activation(channel.receive());
    if (act.iteration != i) throw ProtocolError("activation for the wrong iteration");
    if (act.data.shape() != hidden_shape) throw ProtocolError("activation has the wrong shape");
    if (act.reencrypted) {
      EncImagePayload img = decode_enc_image(channel.receive(), info.he_params);
      if (img.iteration != i || img.y.shape != info.shape) {
        throw ProtocolError("EncImage does not match the current iteration");
      }
      state = HybridState{std::move(img.y), std::move(img.z)};
    }
    if (!state) throw ProtocolError("no encrypted image to work on");

    Stopwatch watch;
    const Tensor e = model.forward(act.data, cond);
    rec.forward_time = watch.seconds();

    const Tensor noise = noise_source.draw(info.shape);
    watch.restart();
    const AffineStep step = denoise_factors(e, schedule.steps[i], noise);
    try {
      state = denoise_encrypted(state->y, state->z, step, *backend);
    } catch (const DepthError& err) {
      throw ProtocolError(std::string("encrypted image has no levels left: ") + err.what());
    }
    rec.denoise_time = watch.seconds();

    EncImagePayload down;
    down.iteration = i;
    if (!state->y.packed.empty()) {
      rec.level_after = state->y.packed.front().level;
      // The next multiply would hit the bottom of the chain; ask for a
      // fresh encryption instead.
      if (rec.level_after == 0) {
        down.flags |= EncImagePayload::kReencryptRequired;
        rec.requested_reencryption = true;
      }
    }
    down.y = state->y;
    down.z = state->z;
    channel.send(encode_enc_image(down));
    iterations_.push_back(rec);
  }
  expect_ack(channel.receive());
}

}  // namespace pdn::sampler
