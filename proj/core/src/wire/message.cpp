// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "pdn/wire/message.hpp"

#include <cstring>
#include <string>

#include "pdn/errors.hpp"

namespace pdn::wire {
namespace {

constexpr std::string_view kMagic = "HEDM";

bool known_kind(std::uint8_t k) {
  return k >= static_cast<std::uint8_t>(MessageKind::kCondTensor) &&
         k <= static_cast<std::uint8_t>(MessageKind::kAck);
}

}  // namespace

std::string_view to_string(MessageKind kind) {
  switch (kind) {
    case MessageKind::kCondTensor:
      return "CondTensor";
    case MessageKind::kActivation:
      return "Activation";
    case MessageKind::kEncImage:
      return "EncImage";
    case MessageKind::kPlainScheduleInfo:
      return "PlainScheduleInfo";
    case MessageKind::kAck:
      return "Ack";
  }
  return "Unknown";
}

std::size_t kind_index(MessageKind kind) noexcept {
  return static_cast<std::size_t>(kind) - 1;
}

Bytes frame(const Message& msg) {
  ByteWriter out(kFrameHeaderSize + msg.payload.size());
  out.magic(kMagic);
  out.u16(kProtocolVersion);
  out.u8(static_cast<std::uint8_t>(msg.kind));
  out.u64(msg.payload.size());
  out.raw(msg.payload);
  return std::move(out).take();
}

FrameHeader parse_frame_header(std::span<const std::uint8_t, kFrameHeaderSize> header) {
  if (std::memcmp(header.data(), kMagic.data(), kMagic.size()) != 0) {
    throw ProtocolError("bad frame magic");
  }
  ByteReader in(header.subspan(kMagic.size()));
  const std::uint16_t version = in.u16();
  if (version != kProtocolVersion) {
    throw ProtocolError("unsupported protocol version " + std::to_string(version));
  }
  const std::uint8_t kind = in.u8();
  if (!known_kind(kind)) throw ProtocolError("unknown message kind " + std::to_string(kind));
  FrameHeader h;
  h.kind = static_cast<MessageKind>(kind);
  h.length = in.u64();
  if (h.length > kMaxPayload) throw ProtocolError("frame payload too large");
  return h;
}

Message unframe(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kFrameHeaderSize) {
    throw ProtocolError("truncated frame: " + std::to_string(bytes.size()) + " bytes");
  }
  const FrameHeader h = parse_frame_header(bytes.first<kFrameHeaderSize>());
  const std::size_t body = bytes.size() - kFrameHeaderSize;
  if (body != h.length) {
    throw ProtocolError("frame declares " + std::to_string(h.length) + " payload bytes but " +
                        std::to_string(body) + " follow");
  }
  Message msg;
  msg.kind = h.kind;
  msg.payload.assign(bytes.begin() + kFrameHeaderSize, bytes.end());
  return msg;
}

}  // namespace pdn::wire
