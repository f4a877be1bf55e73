// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "pdn/distortion.hpp"
#include "pdn/he/backend.hpp"
#include "pdn/sampler/sampling.hpp"
#include "pdn/wire/transport.hpp"

namespace pdn::sampler {

struct ClientConfig {
  SampleConfig sample;
  double threshold = 0.01;
  std::uint32_t reencrypt_every = 1;
  CostFunction cost = CostFunction::kHill;
  he::BackendKind backend = he::BackendKind::kCkksLite;
  he::HeParams he_params = he::HeParams::defaults();
};

/// What the client measured in one iteration.
struct ClientIteration {
  double forward_time = 0.0;
  /// Split (cost, removal) plus encryption; 0 when no re-encryption happened.
  double encrypt_time = 0.0;
  double decrypt_time = 0.0;
  bool reencrypted = false;
  /// Re-encryption requested by the server because the chain ran out.
  bool forced = false;
  /// Fraction of elements outside the encrypted part.
  double sparsity = 0.0;
  std::size_t encrypted_values = 0;
  std::uint64_t bytes_up = 0;
  std::uint64_t bytes_down = 0;
};

/// The user side. Holds the secret key, the prompt and the embedding seed;
/// none of them leave this object. Keys and encryption randomness come from
/// the sample seed's kEncryption stream.
class ClientRole {
 public:
  explicit ClientRole(ClientConfig config);

  /// Runs one full session over `channel` and returns the final latent.
  /// Throws SessionError or ProtocolError if the peer misbehaves.
  Tensor run(wire::Channel& channel);

  [[nodiscard]] const std::vector<ClientIteration>& iterations() const noexcept {
    return iterations_;
  }

 private:
  ClientConfig config_;
  std::vector<ClientIteration> iterations_;
};

}  // namespace pdn::sampler
