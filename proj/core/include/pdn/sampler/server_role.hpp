// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "pdn/wire/transport.hpp"

namespace pdn::sampler {

/// What the server measured in one iteration.
struct ServerIteration {
  double forward_time = 0.0;
  double denoise_time = 0.0;
  /// Level of the encrypted part after the step.
  std::size_t level_after = 0;
  bool requested_reencryption = false;
};

/// The service side. Everything it learns arrives through the channel:
/// public run parameters, the condition tensor, activations and hybrid
/// images whose sensitive part is encrypted. It holds no key material.
class ServerRole {
 public:
  /// Serves one session; returns after the closing Ack. Throws
  /// ProtocolError on unexpected traffic and SessionError on disconnect.
  void run(wire::Channel& channel);

  [[nodiscard]] const std::vector<ServerIteration>& iterations() const noexcept {
    return iterations_;
  }

 private:
  std::vector<ServerIteration> iterations_;
};

}  // namespace pdn::sampler
