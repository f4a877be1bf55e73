// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

#include "pdn/wire/bytes.hpp"

namespace pdn::wire {

enum class MessageKind : std::uint8_t {
  kCondTensor = 1,
  kActivation = 2,
  kEncImage = 3,
  kPlainScheduleInfo = 4,
  kAck = 5,
};

inline constexpr std::size_t kMessageKindCount = 5;
std::string_view to_string(MessageKind kind);
/// Position of `kind` in [0, kMessageKindCount).
std::size_t kind_index(MessageKind kind) noexcept;

struct Message {
  MessageKind kind = MessageKind::kAck;
  Bytes payload;

  friend bool operator==(const Message&, const Message&) = default;
};

inline constexpr std::uint16_t kProtocolVersion = 1;
/// "HEDM" | version u16 | kind u8 | payload length u64.
inline constexpr std::size_t kFrameHeaderSize = 15;
/// Frames above this are rejected before any allocation.
inline constexpr std::uint64_t kMaxPayload = std::uint64_t{1} << 32;

struct FrameHeader {
  MessageKind kind = MessageKind::kAck;
  std::uint64_t length = 0;
};

Bytes frame(const Message& msg);
/// Parses and validates a header. Throws ProtocolError.
FrameHeader parse_frame_header(std::span<const std::uint8_t, kFrameHeaderSize> header);
/// Parses exactly one complete frame. Throws ProtocolError on truncation,
/// trailing bytes, bad magic/version or unknown kind.
Message unframe(std::span<const std::uint8_t> bytes);

}  // namespace pdn::wire
