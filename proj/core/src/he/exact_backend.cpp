// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>

#include "pdn/he/backend.hpp"

namespace pdn::he {
namespace {

// Slot values travel unscaled, so every operation is plain double arithmetic
// on the same operands the plaintext pipeline uses. Scale and level are still
// tracked so depth exhaustion surfaces at the same points as under CkksLite.
class MockExactBackend final : public HeBackend {
 public:
  explicit MockExactBackend(const HeParams& params) : HeBackend(params) {}

  [[nodiscard]] BackendKind kind() const noexcept override { return BackendKind::kMockExact; }

 protected:
  [[nodiscard]] Representation representation() const noexcept override {
    return Representation::kExact;
  }

  KeyPair do_keygen(std::uint64_t) const override {
    KeyPair keys;
    keys.secret_key.rep = Representation::kExact;
    keys.public_key.rep = Representation::kExact;
    return keys;
  }

  Plaintext do_encode(std::span<const double> values, double scale,
                      std::size_t level) const override {
    Plaintext pt;
    pt.rep = Representation::kExact;
    pt.slots.assign(slot_count(), 0.0);
    std::copy(values.begin(), values.end(), pt.slots.begin());
    pt.scale = scale;
    pt.level = level;
    return pt;
  }

  Plaintext do_encode_constant(double value, double scale, std::size_t level) const override {
    Plaintext pt;
    pt.rep = Representation::kExact;
    pt.slots.assign(slot_count(), value);
    pt.scale = scale;
    pt.level = level;
    return pt;
  }

  std::vector<double> do_decode(const Plaintext& pt) const override { return pt.slots; }

  Ciphertext do_encrypt(const PublicKey&, const Plaintext& pt, Prng&) const override {
    return wrap(pt);
  }

  Ciphertext do_encrypt_symmetric(const SecretKey&, const Plaintext& pt, Prng&) const override {
    return wrap(pt);
  }

  Plaintext do_decrypt(const SecretKey&, const Ciphertext& ct) const override {
    Plaintext pt;
    pt.rep = Representation::kExact;
    pt.slots = ct.slots;
    pt.scale = ct.scale;
    pt.level = ct.level;
    return pt;
  }

  Ciphertext do_add(const Ciphertext& a, const Ciphertext& b) const override {
    Ciphertext out = a;
    for (std::size_t i = 0; i < out.slots.size(); ++i) out.slots[i] = a.slots[i] + b.slots[i];
    return out;
  }

  Ciphertext do_add_plain(const Ciphertext& a, const Plaintext& b) const override {
    Ciphertext out = a;
    for (std::size_t i = 0; i < out.slots.size(); ++i) out.slots[i] = a.slots[i] + b.slots[i];
    return out;
  }

  Ciphertext do_multiply_plain(const Ciphertext& a, const Plaintext& b) const override {
    Ciphertext out = a;
    for (std::size_t i = 0; i < out.slots.size(); ++i) out.slots[i] = a.slots[i] * b.slots[i];
    out.scale = a.scale * b.scale;
    return out;
  }

  Ciphertext do_rescale(const Ciphertext& a) const override {
    Ciphertext out = a;
    out.scale = a.scale / prime_at(a.level);
    out.level = a.level - 1;
    return out;
  }

 private:
  static Ciphertext wrap(const Plaintext& pt) {
    Ciphertext ct;
    ct.rep = Representation::kExact;
    ct.slots = pt.slots;
    ct.scale = pt.scale;
    ct.level = pt.level;
    return ct;
  }
};

}  // namespace

std::unique_ptr<HeBackend> make_exact_backend(const HeParams& params) {
  return std::make_unique<MockExactBackend>(params);
}

}  // namespace pdn::he
