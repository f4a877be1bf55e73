// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>

#include "pdn/he/params.hpp"
#include "pdn/he/types.hpp"
#include "pdn/wire/bytes.hpp"

namespace pdn::he {

/// Object tag byte of the "HEDF" container.
enum class ObjectTag : std::uint8_t {
  kPlaintext = 0,
  kCiphertext = 1,
  kExactPlaintext = 2,
  kExactCiphertext = 3,
  kSecretKey = 4,
  kPublicKey = 5,
};

inline constexpr std::uint16_t kHeFormatVersion = 1;

// Layout (little-endian):
//   "HEDF" | version u16 | tag u8 | N u32 | level u8 | scale f64 |
//   per poly, per live prime: count u32, count x u64 residues.
// Residues are stored in NTT evaluation order, exactly as held in memory.
// Exact-backend objects carry one block of N/2 IEEE-754 bit patterns.

wire::Bytes serialize(const Plaintext& pt);
wire::Bytes serialize(const Ciphertext& ct);
wire::Bytes serialize(const SecretKey& sk);
wire::Bytes serialize(const PublicKey& pk);

/// Each deserializer throws FormatError on truncated/corrupt input and
/// ParamsMismatchError when the buffer was produced under different params.
Plaintext deserialize_plaintext(std::span<const std::uint8_t> bytes, const HeParams& params);
Ciphertext deserialize_ciphertext(std::span<const std::uint8_t> bytes, const HeParams& params);
SecretKey deserialize_secret_key(std::span<const std::uint8_t> bytes, const HeParams& params);
PublicKey deserialize_public_key(std::span<const std::uint8_t> bytes, const HeParams& params);

/// Reads one ciphertext from the current position of a larger stream.
Ciphertext read_ciphertext(wire::ByteReader& in, const HeParams& params);
void write_ciphertext(wire::ByteWriter& out, const Ciphertext& ct);

}  // namespace pdn::he
