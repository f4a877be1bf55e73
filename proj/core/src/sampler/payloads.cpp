// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "pdn/sampler/payloads.hpp"

#include <string>

#include "pdn/errors.hpp"

namespace pdn::sampler {
namespace {

using wire::ByteReader;
using wire::ByteWriter;
using wire::Message;
using wire::MessageKind;

void expect_kind(const Message& msg, MessageKind kind) {
  if (msg.kind != kind) {
    throw ProtocolError("expected " + std::string(wire::to_string(kind)) + " message, got " +
                        std::string(wire::to_string(msg.kind)));
  }
}

// Runs a payload parser, turning format problems into protocol errors and
// rejecting trailing bytes.
template <typename F>
auto parse(const Message& msg, F&& body) {
  try {
    ByteReader in(msg.payload);
    auto out = body(in);
    in.expect_end();
    return out;
  } catch (const FormatError& e) {
    throw ProtocolError(std::string("malformed ") + std::string(wire::to_string(msg.kind)) +
                        " payload: " + e.what());
  } catch (const ShapeError& e) {
    throw ProtocolError(std::string("malformed ") + std::string(wire::to_string(msg.kind)) +
                        " payload: " + e.what());
  }
}

void write_shape(ByteWriter& out, const Shape& s) {
  out.u32(static_cast<std::uint32_t>(s.channels));
  out.u32(static_cast<std::uint32_t>(s.height));
  out.u32(static_cast<std::uint32_t>(s.width));
}

Shape read_shape(ByteReader& in) {
  Shape s;
  s.channels = in.u32();
  s.height = in.u32();
  s.width = in.u32();
  if (s.numel() > (std::size_t{1} << 28)) throw FormatError("tensor shape too large");
  return s;
}

void write_tensor(ByteWriter& out, const Tensor& t) {
  write_shape(out, t.shape());
  out.f64_array(t.values());
}

Tensor read_tensor(ByteReader& in) {
  const Shape s = read_shape(in);
  if (s.numel() * sizeof(double) > in.remaining()) throw FormatError("tensor data truncated");
  std::vector<double> values(s.numel());
  in.f64_array(values);
  return Tensor(s, std::move(values));
}

void write_string(ByteWriter& out, const std::string& s) {
  out.u32(static_cast<std::uint32_t>(s.size()));
  out.raw({reinterpret_cast<const std::uint8_t*>(s.data()), s.size()});
}

std::string read_string(ByteReader& in) {
  const std::uint32_t n = in.u32();
  const auto bytes = in.raw(n);
  return {reinterpret_cast<const char*>(bytes.data()), bytes.size()};
}

}  // namespace

Message encode_schedule_info(const ScheduleInfo& info) {
  ByteWriter out;
  out.u32(info.steps);
  out.f64(info.eta);
  out.u32(info.num_train_steps);
  write_shape(out, info.shape);
  out.u32(info.reencrypt_every);
  out.u8(info.backend == he::BackendKind::kCkksLite ? 0 : 1);
  out.u64(info.noise_seed);
  write_string(out, info.he_params.to_text());
  out.u32(static_cast<std::uint32_t>(info.model.latent_channels));
  out.u32(static_cast<std::uint32_t>(info.model.hidden_channels));
  out.u64(info.model.weight_seed);
  return {MessageKind::kPlainScheduleInfo, std::move(out).take()};
}

ScheduleInfo decode_schedule_info(const Message& msg) {
  expect_kind(msg, MessageKind::kPlainScheduleInfo);
  return parse(msg, [](ByteReader& in) {
    ScheduleInfo info;
    info.steps = in.u32();
    info.eta = in.f64();
    info.num_train_steps = in.u32();
    info.shape = read_shape(in);
    info.reencrypt_every = in.u32();
    const std::uint8_t backend = in.u8();
    if (backend > 1) throw FormatError("unknown backend id");
    info.backend = backend == 0 ? he::BackendKind::kCkksLite : he::BackendKind::kMockExact;
    info.noise_seed = in.u64();
    try {
      info.he_params = he::HeParams::from_text(read_string(in));
    } catch (const ParameterError& e) {
      throw FormatError(e.what());
    }
    info.model.latent_channels = in.u32();
    info.model.hidden_channels = in.u32();
    info.model.weight_seed = in.u64();
    if (info.steps == 0 || info.reencrypt_every == 0) {
      throw FormatError("steps and reencrypt_every must be positive");
    }
    return info;
  });
}

Message encode_condition(const ConditionTensor& cond) {
  ByteWriter out;
  out.u32(static_cast<std::uint32_t>(cond.tokens));
  out.u32(static_cast<std::uint32_t>(cond.dim));
  out.f64_array(cond.data);
  return {MessageKind::kCondTensor, std::move(out).take()};
}

ConditionTensor decode_condition(const Message& msg) {
  expect_kind(msg, MessageKind::kCondTensor);
  return parse(msg, [](ByteReader& in) {
    ConditionTensor cond;
    cond.tokens = in.u32();
    cond.dim = in.u32();
    if (cond.tokens != kCondTokens || cond.dim != kCondDim) {
      throw FormatError("condition tensor must be 77x16");
    }
    cond.data.resize(cond.tokens * cond.dim);
    in.f64_array(cond.data);
    return cond;
  });
}

Message encode_activation(const ActivationPayload& act) {
  ByteWriter out;
  out.u32(act.iteration);
  out.u8(act.reencrypted ? 1 : 0);
  write_tensor(out, act.data);
  return {MessageKind::kActivation, std::move(out).take()};
}

ActivationPayload decode_activation(const Message& msg) {
  expect_kind(msg, MessageKind::kActivation);
  return parse(msg, [](ByteReader& in) {
    ActivationPayload act;
    act.iteration = in.u32();
    const std::uint8_t flag = in.u8();
    if (flag > 1) throw FormatError("bad activation flag");
    act.reencrypted = flag == 1;
    act.data = read_tensor(in);
    return act;
  });
}

Message encode_enc_image(const EncImagePayload& img) {
  ByteWriter out;
  out.u32(img.iteration);
  out.u8(img.flags);
  write_enc_coo(out, img.y);
  write_tensor(out, img.z);
  return {MessageKind::kEncImage, std::move(out).take()};
}

EncImagePayload decode_enc_image(const Message& msg, const he::HeParams& params) {
  expect_kind(msg, MessageKind::kEncImage);
  return parse(msg, [&params](ByteReader& in) {
    EncImagePayload img;
    img.iteration = in.u32();
    img.flags = in.u8();
    img.y = read_enc_coo(in, params);
    img.z = read_tensor(in);
    if (img.y.shape != img.z.shape()) throw FormatError("y and z shapes differ");
    return img;
  });
}

Message make_ack() { return {MessageKind::kAck, {}}; }

void expect_ack(const Message& msg) {
  expect_kind(msg, MessageKind::kAck);
  if (!msg.payload.empty()) throw ProtocolError("Ack carries no payload");
}

}  // namespace pdn::sampler
