// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "pdn/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pdn/errors.hpp"
#include "pdn/he/serialize.hpp"

namespace pdn {
namespace {

template <typename Encrypt>
std::vector<he::Ciphertext> encrypt_blocks(std::span<const double> values,
                                           const he::HeBackend& backend, Encrypt&& encrypt) {
  const std::size_t slots = backend.slot_count();
  std::vector<he::Ciphertext> out;
  out.reserve(packed_ciphertext_count(values.size(), slots));
  for (std::size_t start = 0; start < values.size(); start += slots) {
    const std::size_t len = std::min(slots, values.size() - start);
    const he::Plaintext pt =
        backend.encode(values.subspan(start, len), backend.params().scale, backend.top_level());
    out.push_back(encrypt(pt));
  }
  return out;
}

// Gathers src at the indices held by ciphertext k.
std::vector<double> gather_block(const EncCooTensor& e, const Tensor& src, std::size_t k,
                                 std::size_t slots) {
  const std::size_t start = k * slots;
  const std::size_t len = std::min(slots, e.indices.size() - start);
  std::vector<double> out(len);
  for (std::size_t i = 0; i < len; ++i) out[i] = src[e.indices[start + i]];
  return out;
}

void check_shape(const EncCooTensor& e, const Tensor& t, const char* what) {
  require_same_shape(e.shape, t.shape(), what);
}

}  // namespace

CooTensor CooTensor::from_parts(Shape shape, std::vector<std::size_t> indices,
                                std::vector<double> values) {
  if (indices.size() != values.size()) {
    throw InputError("coo index and value counts differ");
  }
  CooTensor out;
  out.shape = shape;
  const std::size_t n = shape.numel();
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] >= n) throw InputError("coo index out of range");
    if (k > 0 && indices[k] <= indices[k - 1]) {
      throw InputError("coo indices must be strictly increasing");
    }
    if (!std::isfinite(values[k])) throw InputError("coo value is not finite");
    if (values[k] == 0.0) continue;
    out.indices.push_back(indices[k]);
    out.values.push_back(values[k]);
  }
  return out;
}

CooTensor to_coo(const Tensor& x) {
  CooTensor out;
  out.shape = x.shape();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] != 0.0) {
      out.indices.push_back(i);
      out.values.push_back(x[i]);
    }
  }
  return out;
}

Tensor to_dense(const CooTensor& c) {
  Tensor out(c.shape);
  for (std::size_t k = 0; k < c.indices.size(); ++k) out[c.indices[k]] = c.values[k];
  return out;
}

std::size_t packed_ciphertext_count(std::size_t count, std::size_t slot_count) noexcept {
  return slot_count == 0 ? 0 : (count + slot_count - 1) / slot_count;
}

std::vector<he::Ciphertext> encrypt_packed(std::span<const double> values,
                                           const he::HeBackend& backend, const he::PublicKey& pk,
                                           Prng& rng) {
  return encrypt_blocks(values, backend,
                        [&](const he::Plaintext& pt) { return backend.encrypt(pk, pt, rng); });
}

std::vector<he::Ciphertext> encrypt_packed(std::span<const double> values,
                                           const he::HeBackend& backend, const he::SecretKey& sk,
                                           Prng& rng) {
  return encrypt_blocks(values, backend, [&](const he::Plaintext& pt) {
    return backend.encrypt_symmetric(sk, pt, rng);
  });
}

std::vector<double> decrypt_packed(std::span<const he::Ciphertext> packed, std::size_t count,
                                   const he::HeBackend& backend, const he::SecretKey& sk) {
  if (packed.size() != packed_ciphertext_count(count, backend.slot_count())) {
    throw InputError("ciphertext count does not match value count");
  }
  std::vector<double> out;
  out.reserve(count);
  for (const he::Ciphertext& ct : packed) {
    const std::vector<double> slots = backend.decode(backend.decrypt(sk, ct));
    const std::size_t take = std::min(slots.size(), count - out.size());
    out.insert(out.end(), slots.begin(), slots.begin() + static_cast<std::ptrdiff_t>(take));
  }
  return out;
}

EncCooTensor encrypt_coo(const CooTensor& c, const he::HeBackend& backend,
                         const he::PublicKey& pk, Prng& rng) {
  return EncCooTensor{c.shape, c.indices, encrypt_packed(c.values, backend, pk, rng)};
}

EncCooTensor encrypt_coo(const CooTensor& c, const he::HeBackend& backend,
                         const he::SecretKey& sk, Prng& rng) {
  return EncCooTensor{c.shape, c.indices, encrypt_packed(c.values, backend, sk, rng)};
}

CooTensor decrypt_coo(const EncCooTensor& e, const he::HeBackend& backend,
                      const he::SecretKey& sk) {
  return CooTensor::from_parts(e.shape, e.indices,
                               decrypt_packed(e.packed, e.count(), backend, sk));
}

EncCooTensor partial_mul(const EncCooTensor& e, const Tensor& factor,
                         const he::HeBackend& backend) {
  check_shape(e, factor, "partial_mul");
  EncCooTensor out{e.shape, e.indices, {}};
  out.packed.reserve(e.packed.size());
  for (std::size_t k = 0; k < e.packed.size(); ++k) {
    const he::Ciphertext& ct = e.packed[k];
    const std::vector<double> f = gather_block(e, factor, k, backend.slot_count());
    const he::Plaintext pt = backend.encode(f, backend.prime_at(ct.level), ct.level);
    out.packed.push_back(backend.rescale(backend.multiply_plain(ct, pt)));
  }
  return out;
}

EncCooTensor partial_mul(const EncCooTensor& e, double factor, const he::HeBackend& backend) {
  EncCooTensor out{e.shape, e.indices, {}};
  out.packed.reserve(e.packed.size());
  for (const he::Ciphertext& ct : e.packed) {
    const he::Plaintext pt = backend.encode_constant(factor, backend.prime_at(ct.level), ct.level);
    out.packed.push_back(backend.rescale(backend.multiply_plain(ct, pt)));
  }
  return out;
}

EncCooTensor partial_add(const EncCooTensor& e, const Tensor& addend,
                         const he::HeBackend& backend) {
  check_shape(e, addend, "partial_add");
  EncCooTensor out{e.shape, e.indices, {}};
  out.packed.reserve(e.packed.size());
  for (std::size_t k = 0; k < e.packed.size(); ++k) {
    const he::Ciphertext& ct = e.packed[k];
    const std::vector<double> a = gather_block(e, addend, k, backend.slot_count());
    out.packed.push_back(backend.add_plain(ct, backend.encode(a, ct.scale, ct.level)));
  }
  return out;
}

Tensor merge(const CooTensor& y, const Tensor& z) {
  require_same_shape(y.shape, z.shape(), "merge");
  Tensor out = z;
  for (std::size_t k = 0; k < y.indices.size(); ++k) out[y.indices[k]] = y.values[k];
  return out;
}

void write_enc_coo(wire::ByteWriter& out, const EncCooTensor& e) {
  out.u32(static_cast<std::uint32_t>(e.shape.channels));
  out.u32(static_cast<std::uint32_t>(e.shape.height));
  out.u32(static_cast<std::uint32_t>(e.shape.width));
  out.u32(static_cast<std::uint32_t>(e.count()));
  out.u32(static_cast<std::uint32_t>(e.packed.size()));
  for (std::size_t i : e.indices) out.u32(static_cast<std::uint32_t>(i));
  for (const he::Ciphertext& ct : e.packed) {
    wire::ByteWriter one;
    he::write_ciphertext(one, ct);
    const wire::Bytes bytes = std::move(one).take();
    out.u32(static_cast<std::uint32_t>(bytes.size()));
    out.raw(bytes);
  }
}

EncCooTensor read_enc_coo(wire::ByteReader& in, const he::HeParams& params) {
  EncCooTensor e;
  e.shape.channels = in.u32();
  e.shape.height = in.u32();
  e.shape.width = in.u32();
  const std::uint32_t count = in.u32();
  const std::uint32_t cts = in.u32();
  if (count > e.shape.numel()) throw FormatError("enc-coo count exceeds tensor size");
  if (cts != packed_ciphertext_count(count, params.slot_count())) {
    throw FormatError("enc-coo ciphertext count does not match value count");
  }
  std::vector<std::uint32_t> raw(count);
  in.u32_array(raw);
  e.indices.assign(raw.begin(), raw.end());
  for (std::size_t k = 0; k < e.indices.size(); ++k) {
    if (e.indices[k] >= e.shape.numel() || (k > 0 && e.indices[k] <= e.indices[k - 1])) {
      throw FormatError("enc-coo indices out of order or out of range");
    }
  }
  e.packed.reserve(cts);
  for (std::uint32_t k = 0; k < cts; ++k) {
    const std::uint32_t len = in.u32();
    wire::ByteReader one(in.raw(len));
    e.packed.push_back(he::read_ciphertext(one, params));
    one.expect_end();
    if (k > 0 && (e.packed[k].level != e.packed[0].level ||
                  e.packed[k].scale != e.packed[0].scale)) {
      throw FormatError("enc-coo ciphertexts disagree on scale or level");
    }
  }
  return e;
}

wire::Bytes serialize(const EncCooTensor& e) {
  wire::ByteWriter out;
  write_enc_coo(out, e);
  return std::move(out).take();
}

EncCooTensor deserialize_enc_coo(std::span<const std::uint8_t> bytes,
                                 const he::HeParams& params) {
  wire::ByteReader in(bytes);
  EncCooTensor e = read_enc_coo(in, params);
  in.expect_end();
  return e;
}

}  // namespace pdn
