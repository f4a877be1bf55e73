// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "pdn/wire/transport.hpp"

#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <condition_variable>
#include <cstring>
#include <deque>
#include <mutex>
#include <string>

#include "pdn/errors.hpp"

namespace pdn::wire {
namespace {

// One direction of an in-process link.
struct Pipe {
  std::mutex mu;
  std::condition_variable cv;
  std::deque<Bytes> frames;
  bool closed = false;

  void push(Bytes b) {
    {
      std::lock_guard lock(mu);
      if (closed) throw SessionError("send on a closed channel");
      frames.push_back(std::move(b));
    }
    cv.notify_one();
  }

  Bytes pop() {
    std::unique_lock lock(mu);
    cv.wait(lock, [this] { return !frames.empty() || closed; });
    if (frames.empty()) throw SessionError("peer disconnected");
    Bytes b = std::move(frames.front());
    frames.pop_front();
    return b;
  }

  void close() {
    {
      std::lock_guard lock(mu);
      closed = true;
    }
    cv.notify_all();
  }
};

class InProcessChannel final : public Channel {
 public:
  InProcessChannel(std::shared_ptr<Pipe> out, std::shared_ptr<Pipe> in)
      : out_(std::move(out)), in_(std::move(in)) {}
  ~InProcessChannel() override { InProcessChannel::close(); }

  void close() override { out_->close(); }

 protected:
  void send_frame(Bytes frame) override { out_->push(std::move(frame)); }

  Message receive_frame(std::uint64_t& wire_bytes) override {
    const Bytes b = in_->pop();
    wire_bytes = b.size();
    return unframe(b);
  }

 private:
  std::shared_ptr<Pipe> out_;
  std::shared_ptr<Pipe> in_;
};

class SocketChannel final : public Channel {
 public:
  explicit SocketChannel(int fd) : fd_(fd) {}
  ~SocketChannel() override {
    SocketChannel::close();
    ::close(fd_);
  }

  void close() override {
    if (!shut_) {
      ::shutdown(fd_, SHUT_WR);
      shut_ = true;
    }
  }

 protected:
  void send_frame(Bytes frame) override {
    if (shut_) throw SessionError("send on a closed channel");
    std::size_t off = 0;
    while (off < frame.size()) {
      const ssize_t n = ::send(fd_, frame.data() + off, frame.size() - off, MSG_NOSIGNAL);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw SessionError(std::string("socket send failed: ") + std::strerror(errno));
      }
      off += static_cast<std::size_t>(n);
    }
  }

  Message receive_frame(std::uint64_t& wire_bytes) override {
    std::array<std::uint8_t, kFrameHeaderSize> header{};
    if (!read_exact(header.data(), header.size(), true)) throw SessionError("peer disconnected");
    const FrameHeader h = parse_frame_header(header);
    Message msg;
    msg.kind = h.kind;
    msg.payload.resize(h.length);
    if (!read_exact(msg.payload.data(), msg.payload.size(), false)) {
      throw ProtocolError("truncated frame payload");
    }
    wire_bytes = kFrameHeaderSize + h.length;
    return msg;
  }

 private:
  // False on clean EOF before the first byte when allow_eof is set.
  bool read_exact(std::uint8_t* p, std::size_t n, bool allow_eof) {
    std::size_t off = 0;
    while (off < n) {
      const ssize_t got = ::recv(fd_, p + off, n - off, 0);
      if (got < 0) {
        if (errno == EINTR) continue;
        throw SessionError(std::string("socket receive failed: ") + std::strerror(errno));
      }
      if (got == 0) {
        if (off == 0 && allow_eof) return false;
        throw ProtocolError("truncated frame: stream ended mid-frame");
      }
      off += static_cast<std::size_t>(got);
    }
    return true;
  }

  int fd_;
  bool shut_ = false;
};

}  // namespace

std::uint64_t Channel::send(const Message& msg) {
  Bytes f = frame(msg);
  const std::uint64_t n = f.size();
  send_frame(std::move(f));
  stats_.sent[kind_index(msg.kind)] += 1;
  stats_.bytes_sent += n;
  return n;
}

Message Channel::receive() {
  std::uint64_t n = 0;
  Message msg = receive_frame(n);
  stats_.received[kind_index(msg.kind)] += 1;
  stats_.bytes_received += n;
  return msg;
}

TransportKind parse_transport_kind(std::string_view name) {
  if (name == "in-process" || name == "inprocess") return TransportKind::kInProcess;
  if (name == "socket" || name == "local-socket") return TransportKind::kLocalSocket;
  throw ConfigError("unknown transport '" + std::string(name) + "' (expected in-process or socket)");
}

std::string_view to_string(TransportKind kind) {
  return kind == TransportKind::kInProcess ? "in-process" : "socket";
}

ChannelPair make_in_process_pair() {
  auto a_to_b = std::make_shared<Pipe>();
  auto b_to_a = std::make_shared<Pipe>();
  return {std::make_unique<InProcessChannel>(a_to_b, b_to_a),
          std::make_unique<InProcessChannel>(b_to_a, a_to_b)};
}

ChannelPair make_socket_pair() {
  int fds[2];
  if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, fds) != 0) {
    throw SessionError(std::string("socketpair failed: ") + std::strerror(errno));
  }
  return {std::make_unique<SocketChannel>(fds[0]), std::make_unique<SocketChannel>(fds[1])};
}

ChannelPair make_channel_pair(TransportKind kind) {
  return kind == TransportKind::kInProcess ? make_in_process_pair() : make_socket_pair();
}

}  // namespace pdn::wire
