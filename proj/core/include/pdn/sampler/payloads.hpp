// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "pdn/he/backend.hpp"
#include "pdn/he/params.hpp"
#include "pdn/sampler/predictor.hpp"
#include "pdn/sparse.hpp"
#include "pdn/tensor.hpp"
#include "pdn/wire/message.hpp"

namespace pdn::sampler {

/// Public run parameters sent once at session start.
struct ScheduleInfo {
  std::uint32_t steps = 0;
  double eta = 0.0;
  std::uint32_t num_train_steps = 1000;
  Shape shape;
  std::uint32_t reencrypt_every = 1;
  he::BackendKind backend = he::BackendKind::kCkksLite;
  /// Seed of the per-step noise stream, which the server draws from.
  std::uint64_t noise_seed = 0;
  he::HeParams he_params;
  PredictorConfig model;

  friend bool operator==(const ScheduleInfo&, const ScheduleInfo&) = default;
};

/// Client-side first-layer output for one iteration.
struct ActivationPayload {
  std::uint32_t iteration = 0;
  /// An EncImage with a freshly encrypted split follows this message.
  bool reencrypted = false;
  Tensor data;

  friend bool operator==(const ActivationPayload&, const ActivationPayload&) = default;
};

/// Hybrid image: encrypted sparse part y, plaintext dense part z.
struct EncImagePayload {
  static constexpr std::uint8_t kReencryptRequired = 1;

  std::uint32_t iteration = 0;
  std::uint8_t flags = 0;
  EncCooTensor y;
  Tensor z;

  [[nodiscard]] bool reencrypt_required() const noexcept {
    return (flags & kReencryptRequired) != 0;
  }
};

// Encoders build complete messages; decoders check the kind and throw
// ProtocolError on any malformed payload.

wire::Message encode_schedule_info(const ScheduleInfo& info);
ScheduleInfo decode_schedule_info(const wire::Message& msg);

wire::Message encode_condition(const ConditionTensor& cond);
ConditionTensor decode_condition(const wire::Message& msg);

wire::Message encode_activation(const ActivationPayload& act);
ActivationPayload decode_activation(const wire::Message& msg);

wire::Message encode_enc_image(const EncImagePayload& img);
EncImagePayload decode_enc_image(const wire::Message& msg, const he::HeParams& params);

wire::Message make_ack();
void expect_ack(const wire::Message& msg);

}  // namespace pdn::sampler
