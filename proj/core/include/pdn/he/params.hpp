// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace pdn::he {

/// Parameters of the leveled CKKS-style scheme.
///
/// The modulus chain q_0..q_L is ordered bottom-up: a ciphertext at level l
/// lives modulo q_0 * ... * q_l, and rescaling at level l drops q_l. q_0 is
/// the base prime that must hold a fresh-scale message with headroom; the
/// upper primes are consumed one per plaintext multiplication.
///
/// These parameters target correctness and benchmarking. No security level
/// is claimed and the scheme has not been audited.
struct HeParams {
  std::size_t ring_degree = 8192;
  std::vector<std::uint64_t> moduli;
  double scale = 1073741824.0;  // 2^30
  double error_stddev = 3.2;

  /// Default chain: bit sizes {45, 26, 26, 31} at N = 8192, scale 2^30.
  static HeParams defaults();
  /// Builds a chain with primes of the given bit sizes, bottom prime first.
  static HeParams make(std::size_t ring_degree, std::span<const int> bit_sizes,
                       double scale = 1073741824.0, double error_stddev = 3.2);

  [[nodiscard]] std::size_t slot_count() const noexcept { return ring_degree / 2; }
  [[nodiscard]] std::size_t chain_length() const noexcept { return moduli.size(); }
  [[nodiscard]] std::size_t top_level() const noexcept { return moduli.size() - 1; }
  /// log2 of q_0 * ... * q_level.
  [[nodiscard]] double log2_modulus(std::size_t level) const;

  /// Throws ParameterError when any invariant is violated.
  void validate() const;

  /// key=value text, one entry per line.
  [[nodiscard]] std::string to_text() const;
  static HeParams from_text(const std::string& text);

  friend bool operator==(const HeParams&, const HeParams&) = default;
};

}  // namespace pdn::he
