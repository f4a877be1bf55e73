// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "pdn/he/backend.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pdn/errors.hpp"

namespace pdn::he {

std::unique_ptr<HeBackend> make_ckks_backend(const HeParams& params);
std::unique_ptr<HeBackend> make_exact_backend(const HeParams& params);

namespace {

void check_scales(double a, double b) {
  if (std::abs(a - b) > kScaleTolerance * std::max(std::abs(a), std::abs(b))) {
    throw ScaleError("operand scales differ: " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

void check_same_level(std::size_t a, std::size_t b) {
  if (a != b) {
    throw LevelError("operand levels differ: " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

}  // namespace

BackendKind parse_backend_kind(std::string_view name) {
  if (name == "ckks") return BackendKind::kCkksLite;
  if (name == "mock") return BackendKind::kMockExact;
  throw ConfigError("unknown backend '" + std::string(name) + "' (expected ckks or mock)");
}

std::string_view to_string(BackendKind kind) {
  return kind == BackendKind::kCkksLite ? "ckks" : "mock";
}

HeBackend::HeBackend(HeParams params) : params_(std::move(params)) { params_.validate(); }

double HeBackend::prime_at(std::size_t level) const {
  if (level >= params_.moduli.size()) throw LevelError("level out of range");
  return static_cast<double>(params_.moduli[level]);
}

template <typename T>
void HeBackend::check_rep(const T& obj, const char* what) const {
  if (obj.rep != representation()) {
    throw FormatError(std::string(what) + " was produced by a different backend");
  }
}

void HeBackend::check_encode_args(std::size_t count, double max_abs, double scale,
                                  std::size_t level) const {
  if (count > slot_count()) {
    throw EncodingError("cannot encode " + std::to_string(count) + " values into " +
                        std::to_string(slot_count()) + " slots");
  }
  if (level > top_level()) throw LevelError("encode level beyond the modulus chain");
  if (!(scale > 0.0) || !std::isfinite(scale)) throw EncodingError("scale must be positive");
  if (!std::isfinite(max_abs)) throw EncodingError("cannot encode non-finite values");
  if (max_abs == 0.0) return;
  const double magnitude = std::log2(scale) + std::log2(max_abs);
  if (magnitude + 1.0 >= params_.log2_modulus(level) || magnitude >= 61.0) {
    throw EncodingError("scaled values overflow the coefficient range at level " +
                        std::to_string(level));
  }
}

KeyPair HeBackend::keygen(std::uint64_t seed) const { return do_keygen(seed); }

Plaintext HeBackend::encode(std::span<const double> values, double scale,
                            std::size_t level) const {
  double max_abs = 0.0;
  for (double v : values) max_abs = std::max(max_abs, std::abs(v));
  if (std::any_of(values.begin(), values.end(), [](double v) { return !std::isfinite(v); })) {
    max_abs = std::numeric_limits<double>::infinity();
  }
  check_encode_args(values.size(), max_abs, scale, level);
  return do_encode(values, scale, level);
}

Plaintext HeBackend::encode_constant(double value, double scale, std::size_t level) const {
  check_encode_args(1, std::abs(value), scale, level);
  return do_encode_constant(value, scale, level);
}

std::vector<double> HeBackend::decode(const Plaintext& pt) const {
  check_rep(pt, "plaintext");
  if (pt.level > top_level()) throw LevelError("plaintext level beyond the modulus chain");
  return do_decode(pt);
}

Ciphertext HeBackend::encrypt(const PublicKey& pk, const Plaintext& pt, Prng& rng) const {
  check_rep(pk, "public key");
  check_rep(pt, "plaintext");
  if (pt.level > top_level()) throw LevelError("plaintext level beyond the public key");
  return do_encrypt(pk, pt, rng);
}

Ciphertext HeBackend::encrypt_symmetric(const SecretKey& sk, const Plaintext& pt,
                                        Prng& rng) const {
  check_rep(sk, "secret key");
  check_rep(pt, "plaintext");
  if (pt.level > top_level()) throw LevelError("plaintext level beyond the secret key");
  return do_encrypt_symmetric(sk, pt, rng);
}

Plaintext HeBackend::decrypt(const SecretKey& sk, const Ciphertext& ct) const {
  check_rep(sk, "secret key");
  check_rep(ct, "ciphertext");
  if (ct.level > top_level()) throw LevelError("ciphertext level beyond the secret key");
  return do_decrypt(sk, ct);
}

Ciphertext HeBackend::add(const Ciphertext& a, const Ciphertext& b) const {
  check_rep(a, "ciphertext");
  check_rep(b, "ciphertext");
  check_same_level(a.level, b.level);
  check_scales(a.scale, b.scale);
  return do_add(a, b);
}

Ciphertext HeBackend::add_plain(const Ciphertext& a, const Plaintext& b) const {
  check_rep(a, "ciphertext");
  check_rep(b, "plaintext");
  check_same_level(a.level, b.level);
  check_scales(a.scale, b.scale);
  return do_add_plain(a, b);
}

Ciphertext HeBackend::multiply_plain(const Ciphertext& a, const Plaintext& b) const {
  check_rep(a, "ciphertext");
  check_rep(b, "plaintext");
  check_same_level(a.level, b.level);
  if (a.level == 0) {
    throw DepthError("modulus chain exhausted: no prime left to rescale a product");
  }
  return do_multiply_plain(a, b);
}

Ciphertext HeBackend::rescale(const Ciphertext& a) const {
  check_rep(a, "ciphertext");
  if (a.level == 0) throw DepthError("cannot rescale at level 0");
  return do_rescale(a);
}

std::unique_ptr<HeBackend> make_backend(BackendKind kind, const HeParams& params) {
  switch (kind) {
    case BackendKind::kCkksLite:
      return make_ckks_backend(params);
    case BackendKind::kMockExact:
      return make_exact_backend(params);
  }
  throw ConfigError("unknown backend kind");
}

}  // namespace pdn::he
