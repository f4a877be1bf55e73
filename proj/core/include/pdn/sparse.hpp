// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pdn/he/backend.hpp"
#include "pdn/random.hpp"
#include "pdn/tensor.hpp"
#include "pdn/wire/bytes.hpp"

namespace pdn {

/// Coordinate-format tensor over flat row-major indices. Indices are
/// strictly increasing, in range, and no stored value is zero.
struct CooTensor {
  Shape shape;
  std::vector<std::size_t> indices;
  std::vector<double> values;

  /// Validating constructor; drops explicit zeros. Throws InputError on
  /// unsorted, duplicate or out-of-range indices, or non-finite values.
  static CooTensor from_parts(Shape shape, std::vector<std::size_t> indices,
                              std::vector<double> values);

  [[nodiscard]] std::size_t nnz() const noexcept { return indices.size(); }

  friend bool operator==(const CooTensor&, const CooTensor&) = default;
};

/// Sparse tensor whose values are packed, in index order, into ciphertext
/// slots. Ciphertext k holds values [k * slots, (k + 1) * slots). The index
/// list is plaintext.
struct EncCooTensor {
  Shape shape;
  std::vector<std::size_t> indices;
  std::vector<he::Ciphertext> packed;

  [[nodiscard]] std::size_t count() const noexcept { return indices.size(); }

  friend bool operator==(const EncCooTensor&, const EncCooTensor&) = default;
};

CooTensor to_coo(const Tensor& x);
Tensor to_dense(const CooTensor& c);

/// Number of ciphertexts needed for `count` values.
std::size_t packed_ciphertext_count(std::size_t count, std::size_t slot_count) noexcept;

/// Encodes at params().scale on the top level and encrypts block by block.
std::vector<he::Ciphertext> encrypt_packed(std::span<const double> values,
                                           const he::HeBackend& backend, const he::PublicKey& pk,
                                           Prng& rng);
std::vector<he::Ciphertext> encrypt_packed(std::span<const double> values,
                                           const he::HeBackend& backend, const he::SecretKey& sk,
                                           Prng& rng);
/// Decrypts and concatenates the first `count` slot values.
std::vector<double> decrypt_packed(std::span<const he::Ciphertext> packed, std::size_t count,
                                   const he::HeBackend& backend, const he::SecretKey& sk);

EncCooTensor encrypt_coo(const CooTensor& c, const he::HeBackend& backend,
                         const he::PublicKey& pk, Prng& rng);
EncCooTensor encrypt_coo(const CooTensor& c, const he::HeBackend& backend,
                         const he::SecretKey& sk, Prng& rng);
CooTensor decrypt_coo(const EncCooTensor& e, const he::HeBackend& backend,
                      const he::SecretKey& sk);

/// values *= factor[indices]. The gathered factor is encoded at the scale of
/// the prime about to be dropped, so after the built-in rescale the
/// ciphertext scale is unchanged and one level is consumed.
EncCooTensor partial_mul(const EncCooTensor& e, const Tensor& factor,
                         const he::HeBackend& backend);
/// values *= factor for a scalar factor (constant plaintext).
EncCooTensor partial_mul(const EncCooTensor& e, double factor, const he::HeBackend& backend);

/// values += addend[indices], addend encoded at each ciphertext's scale and level.
EncCooTensor partial_add(const EncCooTensor& e, const Tensor& addend,
                         const he::HeBackend& backend);

/// z with y's values assigned at y's indices.
Tensor merge(const CooTensor& y, const Tensor& z);

/// shape 3 x u32 | count u32 | ciphertext count u32 | count x u32 indices |
/// per ciphertext: u32 byte length, serialized ciphertext.
void write_enc_coo(wire::ByteWriter& out, const EncCooTensor& e);
EncCooTensor read_enc_coo(wire::ByteReader& in, const he::HeParams& params);
wire::Bytes serialize(const EncCooTensor& e);
EncCooTensor deserialize_enc_coo(std::span<const std::uint8_t> bytes, const he::HeParams& params);

}  // namespace pdn
