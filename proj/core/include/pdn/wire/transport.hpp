// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string_view>
#include <utility>

#include "pdn/wire/message.hpp"

namespace pdn::wire {

/// Per-endpoint traffic counters. Byte counts include frame headers.
struct TrafficStats {
  std::array<std::uint64_t, kMessageKindCount> sent{};
  std::array<std::uint64_t, kMessageKindCount> received{};
  std::uint64_t bytes_sent = 0;
  std::uint64_t bytes_received = 0;

  [[nodiscard]] std::uint64_t sent_of(MessageKind k) const { return sent[kind_index(k)]; }
  [[nodiscard]] std::uint64_t received_of(MessageKind k) const { return received[kind_index(k)]; }
};

/// One end of a bidirectional, ordered message channel. An endpoint is used
/// by a single thread; the two ends may live on different threads.
class Channel {
 public:
  virtual ~Channel() = default;

  /// Returns the number of bytes put on the wire.
  std::uint64_t send(const Message& msg);
  /// Blocks for the next message. Throws SessionError once the peer has
  /// closed and nothing is pending, ProtocolError on a malformed frame.
  Message receive();
  /// Signals end of stream to the peer. Idempotent.
  virtual void close() = 0;

  [[nodiscard]] const TrafficStats& stats() const noexcept { return stats_; }

 protected:
  virtual void send_frame(Bytes frame) = 0;
  virtual Message receive_frame(std::uint64_t& wire_bytes) = 0;

 private:
  TrafficStats stats_;
};

enum class TransportKind { kInProcess, kLocalSocket };

/// "in-process" or "socket".
TransportKind parse_transport_kind(std::string_view name);
std::string_view to_string(TransportKind kind);

using ChannelPair = std::pair<std::unique_ptr<Channel>, std::unique_ptr<Channel>>;

/// Two connected endpoints exchanging framed bytes through locked queues.
ChannelPair make_in_process_pair();
/// Two connected endpoints over an AF_UNIX stream socketpair.
ChannelPair make_socket_pair();
ChannelPair make_channel_pair(TransportKind kind);

}  // namespace pdn::wire
