// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pdn/errors.hpp"
#include "pdn/sampler/client_role.hpp"
#include "pdn/tensor.hpp"
#include "pdn/wire/transport.hpp"

namespace pdn {

/// One sampling iteration as seen by both roles.
struct IterationRecord {
  std::uint32_t iteration = 0;
  /// Fraction of elements NOT in the encrypted part.
  double sparsity = 0.0;
  std::uint64_t encrypted_values = 0;
  double client_forward_time = 0.0;
  double server_forward_time = 0.0;
  double encrypt_time = 0.0;
  double denoise_time = 0.0;
  double decrypt_time = 0.0;
  std::uint64_t bytes_up = 0;
  std::uint64_t bytes_down = 0;
  bool reencrypted = false;
  bool forced = false;
  std::uint32_t level_after = 0;

  [[nodiscard]] double forward_time() const noexcept {
    return client_forward_time + server_forward_time;
  }

  friend bool operator==(const IterationRecord&, const IterationRecord&) = default;
};

struct RunTotals {
  double client_forward_time = 0.0;
  double server_forward_time = 0.0;
  double encrypt_time = 0.0;
  double denoise_time = 0.0;
  double decrypt_time = 0.0;
  std::uint64_t bytes_up = 0;
  std::uint64_t bytes_down = 0;
  std::uint32_t reencryptions = 0;
  std::uint32_t forced_reencryptions = 0;

  friend bool operator==(const RunTotals&, const RunTotals&) = default;
};

RunTotals sum_iterations(const std::vector<IterationRecord>& iterations);

struct RunReport {
  sampler::ClientConfig config;
  wire::TransportKind transport = wire::TransportKind::kInProcess;
  std::vector<IterationRecord> iterations;
  RunTotals totals;
  /// Session setup and teardown traffic (schedule, condition, acks).
  std::uint64_t control_bytes_up = 0;
  std::uint64_t control_bytes_down = 0;
  /// Client-side channel counters.
  wire::TrafficStats traffic;
  double wall_time = 0.0;
  bool complete = false;
};

/// Raised when a session ends early. Carries whatever was recorded.
class SessionAborted : public SessionError {
 public:
  SessionAborted(const std::string& what, RunReport partial)
      : SessionError(what), partial_(std::move(partial)) {}
  [[nodiscard]] const RunReport& partial() const noexcept { return partial_; }

 private:
  RunReport partial_;
};

struct PrivateSample {
  Tensor latent;
  RunReport report;
};

/// Runs the server role on a worker thread and the client role on the
/// calling thread, connected by `transport`.
PrivateSample run_session(const sampler::ClientConfig& config,
                          wire::TransportKind transport = wire::TransportKind::kInProcess);

/// Same, over caller-supplied endpoints (client end first). `transport` is
/// only echoed into the report.
PrivateSample run_session(const sampler::ClientConfig& config, wire::ChannelPair channels,
                          wire::TransportKind transport);

inline PrivateSample sample_private(const sampler::ClientConfig& config) {
  return run_session(config, wire::TransportKind::kInProcess);
}

/// Per-iteration CSV, one header line. Reals are printed with 17
/// significant digits so parse_report_csv restores them exactly.
std::string report_csv(const RunReport& report);
std::vector<IterationRecord> parse_report_csv(const std::string& text);

}  // namespace pdn
