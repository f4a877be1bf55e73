// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <memory>
#include <thread>

#include "pdn/errors.hpp"
#include "pdn/metrics.hpp"
#include "pdn/random.hpp"
#include "pdn/sampler/embedding.hpp"
#include "pdn/sampler/payloads.hpp"
#include "pdn/sampler/sampling.hpp"
#include "pdn/sampler/server_role.hpp"
#include "pdn/session.hpp"
#include "pdn/wire/message.hpp"
#include "pdn/wire/transport.hpp"
#include "test_util.hpp"

namespace pdn {
namespace {

using sampler::ClientConfig;
using wire::Message;
using wire::MessageKind;

constexpr MessageKind kAllKinds[] = {MessageKind::kCondTensor, MessageKind::kActivation,
                                     MessageKind::kEncImage, MessageKind::kPlainScheduleInfo,
                                     MessageKind::kAck};

TEST(Framing, RoundTripEveryKind) {
  Prng rng(1);
  for (MessageKind k : kAllKinds) {
    Message m{k, {}};
    for (int i = 0; i < 37; ++i) m.payload.push_back(static_cast<std::uint8_t>(rng()));
    const wire::Bytes f = wire::frame(m);
    EXPECT_EQ(f.size(), wire::kFrameHeaderSize + m.payload.size());
    EXPECT_EQ(wire::unframe(f), m);
  }
}

TEST(Framing, EmptyAndLargePayloads) {
  const Message ack{MessageKind::kAck, {}};
  EXPECT_EQ(wire::frame(ack).size(), wire::kFrameHeaderSize);
  EXPECT_EQ(wire::unframe(wire::frame(ack)), ack);
  Message big{MessageKind::kEncImage, wire::Bytes(5u << 20, 0xab)};
  EXPECT_EQ(wire::unframe(wire::frame(big)), big);
}

TEST(Framing, MalformedFramesRejected) {
  const wire::Bytes good = wire::frame(Message{MessageKind::kActivation, {1, 2, 3}});
  wire::Bytes truncated(good.begin(), good.end() - 1);
  EXPECT_THROW((void)wire::unframe(truncated), ProtocolError);
  wire::Bytes short_header(good.begin(), good.begin() + 7);
  EXPECT_THROW((void)wire::unframe(short_header), ProtocolError);
  wire::Bytes trailing = good;
  trailing.push_back(0);
  EXPECT_THROW((void)wire::unframe(trailing), ProtocolError);
  wire::Bytes bad_magic = good;
  bad_magic[0] = 'X';
  EXPECT_THROW((void)wire::unframe(bad_magic), ProtocolError);
  wire::Bytes bad_version = good;
  bad_version[4] = 9;
  EXPECT_THROW((void)wire::unframe(bad_version), ProtocolError);
  for (std::uint8_t kind : {0, 6, 255}) {
    wire::Bytes unknown = good;
    unknown[6] = kind;
    EXPECT_THROW((void)wire::unframe(unknown), ProtocolError) << int{kind};
  }
}

TEST(Payloads, ScheduleAndConditionRoundTrip) {
  sampler::ScheduleInfo info;
  info.steps = 12;
  info.eta = 0.25;
  info.shape = Shape{4, 16, 8};
  info.reencrypt_every = 3;
  info.backend = he::BackendKind::kMockExact;
  info.noise_seed = 0x1234567890abcdefULL;
  info.he_params = he::HeParams::defaults();
  info.model.weight_seed = 99;
  EXPECT_EQ(sampler::decode_schedule_info(sampler::encode_schedule_info(info)), info);

  const auto cond = sampler::embed_prompt("snow on pines", 4);
  EXPECT_EQ(sampler::decode_condition(sampler::encode_condition(cond)), cond);

  sampler::ActivationPayload act;
  act.iteration = 5;
  act.reencrypted = true;
  act.data = pdn::testing::gaussian_tensor(Shape{8, 4, 4}, 2);
  EXPECT_EQ(sampler::decode_activation(sampler::encode_activation(act)), act);
}

TEST(Payloads, WrongKindOrGarbageRejected) {
  const Message ack = sampler::make_ack();
  EXPECT_NO_THROW(sampler::expect_ack(ack));
  EXPECT_THROW((void)sampler::decode_condition(ack), ProtocolError);
  EXPECT_THROW((void)sampler::decode_activation(ack), ProtocolError);
  EXPECT_THROW((void)sampler::decode_schedule_info(ack), ProtocolError);
  EXPECT_THROW((void)sampler::decode_enc_image(ack, he::HeParams::defaults()), ProtocolError);
  EXPECT_THROW(sampler::expect_ack(Message{MessageKind::kAck, {1}}), ProtocolError);
  Message cond = sampler::encode_condition(sampler::embed_prompt("x", 1));
  cond.payload.resize(cond.payload.size() / 2);
  EXPECT_THROW((void)sampler::decode_condition(cond), ProtocolError);
  EXPECT_THROW(sampler::expect_ack(sampler::encode_condition(sampler::embed_prompt("x", 1))),
               ProtocolError);
}

class ChannelTest : public ::testing::TestWithParam<wire::TransportKind> {};

TEST_P(ChannelTest, OrderedDeliveryAndStats) {
  auto [a, b] = wire::make_channel_pair(GetParam());
  std::thread peer([ch = b.get()] {
    for (int i = 0; i < 50; ++i) {
      Message m = ch->receive();
      ch->send(m);
    }
    ch->close();
  });
  std::uint64_t sent_bytes = 0;
  for (int i = 0; i < 50; ++i) {
    Message m{kAllKinds[i % 5], wire::Bytes(static_cast<std::size_t>(i * 1000), static_cast<std::uint8_t>(i))};
    sent_bytes += a->send(m);
    EXPECT_EQ(a->receive(), m);
  }
  peer.join();
  EXPECT_THROW((void)a->receive(), SessionError);
  EXPECT_EQ(a->stats().bytes_sent, sent_bytes);
  EXPECT_EQ(a->stats().bytes_received, sent_bytes);
  EXPECT_EQ(b->stats().bytes_received, sent_bytes);
  for (MessageKind k : kAllKinds) {
    EXPECT_EQ(a->stats().sent_of(k), 10u);
    EXPECT_EQ(b->stats().received_of(k), 10u);
  }
  a->close();
  a->close();
}

INSTANTIATE_TEST_SUITE_P(Transports, ChannelTest,
                         ::testing::Values(wire::TransportKind::kInProcess,
                                           wire::TransportKind::kLocalSocket),
                         [](const auto& info) {
                           return info.param == wire::TransportKind::kInProcess ? "InProcess"
                                                                               : "Socket";
                         });

TEST(Transport, ParseNames) {
  EXPECT_EQ(wire::parse_transport_kind("in-process"), wire::TransportKind::kInProcess);
  EXPECT_EQ(wire::parse_transport_kind("socket"), wire::TransportKind::kLocalSocket);
  EXPECT_THROW((void)wire::parse_transport_kind("carrier-pigeon"), ConfigError);
}

ClientConfig session_config(he::BackendKind backend, int steps, std::uint32_t every) {
  ClientConfig cc;
  cc.sample.steps = steps;
  cc.sample.shape = Shape{4, 8, 8};
  cc.backend = backend;
  cc.reencrypt_every = every;
  return cc;
}

void expect_message_contract(const RunReport& report, std::uint64_t steps) {
  const auto& t = report.traffic;
  EXPECT_EQ(t.sent_of(MessageKind::kPlainScheduleInfo), 1u);
  EXPECT_EQ(t.sent_of(MessageKind::kCondTensor), 1u);
  EXPECT_EQ(t.sent_of(MessageKind::kActivation), steps);
  EXPECT_EQ(t.sent_of(MessageKind::kEncImage), report.totals.reencryptions);
  EXPECT_EQ(t.sent_of(MessageKind::kAck), 1u);
  EXPECT_EQ(t.received_of(MessageKind::kAck), 1u);
  EXPECT_EQ(t.received_of(MessageKind::kEncImage), steps);
  EXPECT_EQ(t.received_of(MessageKind::kActivation), 0u);
  EXPECT_EQ(t.received_of(MessageKind::kCondTensor), 0u);
  EXPECT_EQ(t.received_of(MessageKind::kPlainScheduleInfo), 0u);
}

TEST(Session, MessageCountsFollowContract) {
  for (std::uint32_t every : {1u, 2u, 5u}) {
    const PrivateSample ps = run_session(session_config(he::BackendKind::kMockExact, 7, every));
    expect_message_contract(ps.report, 7);
    std::uint32_t scheduled = 0;
    for (std::uint32_t i = 0; i < 7; ++i) scheduled += i % every == 0 ? 1 : 0;
    // The mock backend tracks levels too, so long gaps pick up forced ones.
    EXPECT_EQ(ps.report.totals.reencryptions, scheduled + ps.report.totals.forced_reencryptions)
        << every;
    for (std::size_t i = 1; i < ps.report.iterations.size(); ++i) {
      EXPECT_EQ(ps.report.iterations[i].forced, ps.report.iterations[i - 1].level_after == 0 &&
                                                    i % every != 0);
    }
    if (every == 1) EXPECT_EQ(ps.report.totals.forced_reencryptions, 0u);
  }
}

TEST(Session, TransportDoesNotChangeResults) {
  const ClientConfig cc = session_config(he::BackendKind::kCkksLite, 4, 2);
  const PrivateSample a = run_session(cc, wire::TransportKind::kInProcess);
  const PrivateSample b = run_session(cc, wire::TransportKind::kLocalSocket);
  EXPECT_EQ(a.latent, b.latent);
  EXPECT_EQ(a.report.traffic.bytes_sent, b.report.traffic.bytes_sent);
  EXPECT_EQ(a.report.traffic.bytes_received, b.report.traffic.bytes_received);
  EXPECT_EQ(b.report.transport, wire::TransportKind::kLocalSocket);
  expect_message_contract(b.report, 4);
}

TEST(Session, ChainExhaustionForcesReencryption) {
  // Three rescales fit in the default chain; every third step is forced.
  const PrivateSample ps = run_session(session_config(he::BackendKind::kCkksLite, 10, 100));
  const auto& it = ps.report.iterations;
  ASSERT_EQ(it.size(), 10u);
  for (std::size_t i = 0; i < it.size(); ++i) {
    const bool expect_reenc = i % 3 == 0;
    EXPECT_EQ(it[i].reencrypted, expect_reenc) << i;
    EXPECT_EQ(it[i].forced, expect_reenc && i != 0) << i;
    EXPECT_EQ(it[i].level_after, 2u - static_cast<std::uint32_t>(i % 3)) << i;
  }
  EXPECT_EQ(ps.report.totals.forced_reencryptions, 3u);
  expect_message_contract(ps.report, 10);
  const Tensor plain = sampler::sample_plain(session_config(he::BackendKind::kCkksLite, 10, 100).sample);
  EXPECT_GT(cosine(ps.latent, plain), 0.98);
}

TEST(Session, ReportTotalsAndCsv) {
  const PrivateSample ps = run_session(session_config(he::BackendKind::kMockExact, 5, 2));
  const RunReport& r = ps.report;
  EXPECT_TRUE(r.complete);
  EXPECT_EQ(r.totals, sum_iterations(r.iterations));
  EXPECT_EQ(r.control_bytes_up + r.totals.bytes_up, r.traffic.bytes_sent);
  EXPECT_EQ(r.control_bytes_down + r.totals.bytes_down, r.traffic.bytes_received);
  EXPECT_GT(r.control_bytes_up, 0u);
  for (const auto& it : r.iterations) {
    EXPECT_GT(it.bytes_up, 0u);
    EXPECT_GT(it.bytes_down, 0u);
  }
  EXPECT_EQ(parse_report_csv(report_csv(r)), r.iterations);
  EXPECT_THROW((void)parse_report_csv("iteration\n1,2\n"), FormatError);
}

// Forwards to another endpoint and drops the link after a fixed number of
// sends.
class DroppingChannel : public wire::Channel {
 public:
  DroppingChannel(std::unique_ptr<wire::Channel> inner, int sends)
      : inner_(std::move(inner)), sends_left_(sends) {}
  void close() override { inner_->close(); }

 protected:
  void send_frame(wire::Bytes f) override {
    if (sends_left_-- <= 0) {
      inner_->close();
      throw SessionError("link dropped");
    }
    inner_->send(wire::unframe(f));
  }
  Message receive_frame(std::uint64_t& wire_bytes) override {
    Message m = inner_->receive();
    wire_bytes = wire::kFrameHeaderSize + m.payload.size();
    return m;
  }

 private:
  std::unique_ptr<wire::Channel> inner_;
  int sends_left_;
};

TEST(Session, PeerDisconnectYieldsPartialReport) {
  for (auto kind : {wire::TransportKind::kInProcess, wire::TransportKind::kLocalSocket}) {
    auto [client_end, server_end] = wire::make_channel_pair(kind);
    // Ack plus two EncImages, then the server side goes away.
    wire::ChannelPair pair{std::move(client_end),
                           std::make_unique<DroppingChannel>(std::move(server_end), 3)};
    try {
      (void)run_session(session_config(he::BackendKind::kMockExact, 6, 1), std::move(pair), kind);
      FAIL() << "expected SessionAborted";
    } catch (const SessionAborted& e) {
      EXPECT_FALSE(e.partial().complete);
      EXPECT_EQ(e.partial().iterations.size(), 2u);
      EXPECT_NE(std::string(e.what()).find("link dropped"), std::string::npos);
    }
  }
}

TEST(Session, ServerRejectsOutOfOrderTraffic) {
  auto [client_end, server_end] = wire::make_in_process_pair();
  client_end->send(sampler::make_ack());
  client_end->close();
  sampler::ServerRole server;
  EXPECT_THROW(server.run(*server_end), ProtocolError);
}

TEST(Session, ServerSeesOnlyClientDisconnect) {
  auto [client_end, server_end] = wire::make_in_process_pair();
  client_end->close();
  sampler::ServerRole server;
  EXPECT_THROW(server.run(*server_end), SessionError);
}

TEST(Session, EmptyEndpointsRejected) {
  EXPECT_THROW((void)run_session(session_config(he::BackendKind::kMockExact, 1, 1),
                                 wire::ChannelPair{}, wire::TransportKind::kInProcess),
               ConfigError);
}

}  // namespace
}  // namespace pdn
