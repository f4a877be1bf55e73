// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "pdn/he/serialize.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "pdn/errors.hpp"

namespace pdn::he {
namespace {

constexpr std::string_view kMagic = "HEDF";

struct Header {
  ObjectTag tag;
  std::size_t level;
  double scale;
};

void write_header(wire::ByteWriter& out, ObjectTag tag, std::size_t ring_degree,
                  std::size_t level, double scale) {
  out.magic(kMagic);
  out.u16(kHeFormatVersion);
  out.u8(static_cast<std::uint8_t>(tag));
  out.u32(static_cast<std::uint32_t>(ring_degree));
  out.u8(static_cast<std::uint8_t>(level));
  out.f64(scale);
}

void write_poly(wire::ByteWriter& out, const RnsPoly& p) {
  for (std::size_t i = 0; i < p.num_moduli(); ++i) {
    out.u32(static_cast<std::uint32_t>(p.ring_degree()));
    out.u64_array(p.row(i));
  }
}

void write_slots(wire::ByteWriter& out, const std::vector<double>& slots) {
  out.u32(static_cast<std::uint32_t>(slots.size()));
  for (double v : slots) out.u64(std::bit_cast<std::uint64_t>(v));
}

Header read_header(wire::ByteReader& in, const HeParams& params,
                   std::initializer_list<ObjectTag> allowed) {
  in.expect_magic(kMagic);
  const std::uint16_t version = in.u16();
  if (version != kHeFormatVersion) {
    throw FormatError("unsupported HEDF version " + std::to_string(version));
  }
  const auto tag = static_cast<ObjectTag>(in.u8());
  bool ok = false;
  for (ObjectTag t : allowed) ok = ok || t == tag;
  if (!ok) throw FormatError("unexpected object tag " + std::to_string(static_cast<int>(tag)));
  const std::uint32_t n = in.u32();
  if (n != params.ring_degree) {
    throw ParamsMismatchError("buffer ring degree " + std::to_string(n) +
                              " does not match params ring degree " +
                              std::to_string(params.ring_degree));
  }
  const std::size_t level = in.u8();
  if (level > params.top_level()) {
    throw ParamsMismatchError("buffer level " + std::to_string(level) +
                              " exceeds the params modulus chain");
  }
  const double scale = in.f64();
  if (!(scale > 0.0) || !std::isfinite(scale)) throw FormatError("invalid scale in buffer");
  return {tag, level, scale};
}

RnsPoly read_poly(wire::ByteReader& in, const HeParams& params, std::size_t level) {
  RnsPoly p(params.ring_degree, level + 1);
  for (std::size_t i = 0; i <= level; ++i) {
    const std::uint32_t count = in.u32();
    if (count != params.ring_degree) throw FormatError("bad coefficient count in buffer");
    in.u64_array(p.row(i));
    const std::uint64_t q = params.moduli[i];
    for (std::uint64_t r : p.row(i)) {
      if (r >= q) throw FormatError("residue not reduced modulo its prime");
    }
  }
  return p;
}

std::vector<double> read_slots(wire::ByteReader& in, const HeParams& params) {
  const std::uint32_t count = in.u32();
  if (count != params.slot_count()) throw FormatError("bad slot count in buffer");
  std::vector<double> slots(count);
  for (double& v : slots) v = std::bit_cast<double>(in.u64());
  return slots;
}

}  // namespace

void write_ciphertext(wire::ByteWriter& out, const Ciphertext& ct) {
  if (ct.rep == Representation::kExact) {
    write_header(out, ObjectTag::kExactCiphertext, 2 * ct.slots.size(), ct.level, ct.scale);
    write_slots(out, ct.slots);
    return;
  }
  write_header(out, ObjectTag::kCiphertext, ct.c0.ring_degree(), ct.level, ct.scale);
  write_poly(out, ct.c0);
  write_poly(out, ct.c1);
}

Ciphertext read_ciphertext(wire::ByteReader& in, const HeParams& params) {
  const Header h = read_header(in, params, {ObjectTag::kCiphertext, ObjectTag::kExactCiphertext});
  Ciphertext ct;
  ct.level = h.level;
  ct.scale = h.scale;
  if (h.tag == ObjectTag::kExactCiphertext) {
    ct.rep = Representation::kExact;
    ct.slots = read_slots(in, params);
  } else {
    ct.c0 = read_poly(in, params, h.level);
    ct.c1 = read_poly(in, params, h.level);
  }
  return ct;
}

wire::Bytes serialize(const Ciphertext& ct) {
  wire::ByteWriter out;
  write_ciphertext(out, ct);
  return std::move(out).take();
}

wire::Bytes serialize(const Plaintext& pt) {
  wire::ByteWriter out;
  if (pt.rep == Representation::kExact) {
    write_header(out, ObjectTag::kExactPlaintext, 2 * pt.slots.size(), pt.level, pt.scale);
    write_slots(out, pt.slots);
  } else {
    write_header(out, ObjectTag::kPlaintext, pt.poly.ring_degree(), pt.level, pt.scale);
    write_poly(out, pt.poly);
  }
  return std::move(out).take();
}

wire::Bytes serialize(const SecretKey& sk) {
  if (sk.rep != Representation::kRns) throw FormatError("exact-backend keys carry no material");
  wire::ByteWriter out;
  write_header(out, ObjectTag::kSecretKey, sk.s.ring_degree(), sk.s.num_moduli() - 1, 1.0);
  write_poly(out, sk.s);
  return std::move(out).take();
}

wire::Bytes serialize(const PublicKey& pk) {
  if (pk.rep != Representation::kRns) throw FormatError("exact-backend keys carry no material");
  wire::ByteWriter out;
  write_header(out, ObjectTag::kPublicKey, pk.b.ring_degree(), pk.b.num_moduli() - 1, 1.0);
  write_poly(out, pk.b);
  write_poly(out, pk.a);
  return std::move(out).take();
}

Ciphertext deserialize_ciphertext(std::span<const std::uint8_t> bytes, const HeParams& params) {
  wire::ByteReader in(bytes);
  Ciphertext ct = read_ciphertext(in, params);
  in.expect_end();
  return ct;
}

Plaintext deserialize_plaintext(std::span<const std::uint8_t> bytes, const HeParams& params) {
  wire::ByteReader in(bytes);
  const Header h = read_header(in, params, {ObjectTag::kPlaintext, ObjectTag::kExactPlaintext});
  Plaintext pt;
  pt.level = h.level;
  pt.scale = h.scale;
  if (h.tag == ObjectTag::kExactPlaintext) {
    pt.rep = Representation::kExact;
    pt.slots = read_slots(in, params);
  } else {
    pt.poly = read_poly(in, params, h.level);
  }
  in.expect_end();
  return pt;
}

SecretKey deserialize_secret_key(std::span<const std::uint8_t> bytes, const HeParams& params) {
  wire::ByteReader in(bytes);
  const Header h = read_header(in, params, {ObjectTag::kSecretKey});
  if (h.level != params.top_level()) throw ParamsMismatchError("key does not span the chain");
  SecretKey sk;
  sk.s = read_poly(in, params, h.level);
  in.expect_end();
  return sk;
}

PublicKey deserialize_public_key(std::span<const std::uint8_t> bytes, const HeParams& params) {
  wire::ByteReader in(bytes);
  const Header h = read_header(in, params, {ObjectTag::kPublicKey});
  if (h.level != params.top_level()) throw ParamsMismatchError("key does not span the chain");
  PublicKey pk;
  pk.b = read_poly(in, params, h.level);
  pk.a = read_poly(in, params, h.level);
  in.expect_end();
  return pk;
}

}  // namespace pdn::he
