// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace pdn::he {

/// Polynomial in RNS form: one row of N residues per modulus q_0..q_k.
class RnsPoly {
 public:
  RnsPoly() = default;
  RnsPoly(std::size_t ring_degree, std::size_t num_moduli)
      : n_(ring_degree), rows_(num_moduli), data_(ring_degree * num_moduli, 0) {}

  [[nodiscard]] std::size_t ring_degree() const noexcept { return n_; }
  [[nodiscard]] std::size_t num_moduli() const noexcept { return rows_; }
  [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

  std::span<std::uint64_t> row(std::size_t i) noexcept { return {data_.data() + i * n_, n_}; }
  [[nodiscard]] std::span<const std::uint64_t> row(std::size_t i) const noexcept {
    return {data_.data() + i * n_, n_};
  }

  /// Keeps only the first `num_moduli` rows.
  void truncate(std::size_t num_moduli) {
    rows_ = num_moduli;
    data_.resize(n_ * num_moduli);
  }

  friend bool operator==(const RnsPoly&, const RnsPoly&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t rows_ = 0;
  std::vector<std::uint64_t> data_;
};

/// Which backend produced an object. Objects never cross backends.
enum class Representation : std::uint8_t {
  /// Ring elements in NTT (evaluation) form, one row per live prime.
  kRns = 0,
  /// Slot values carried verbatim; used by the exact oracle backend.
  kExact = 1,
};

struct Plaintext {
  Representation rep = Representation::kRns;
  RnsPoly poly;
  std::vector<double> slots;
  double scale = 1.0;
  std::size_t level = 0;

  friend bool operator==(const Plaintext&, const Plaintext&) = default;
};

struct Ciphertext {
  Representation rep = Representation::kRns;
  RnsPoly c0;
  RnsPoly c1;
  std::vector<double> slots;
  double scale = 1.0;
  std::size_t level = 0;

  friend bool operator==(const Ciphertext&, const Ciphertext&) = default;
};

/// Ternary secret s in NTT form over the full chain.
struct SecretKey {
  Representation rep = Representation::kRns;
  RnsPoly s;

  friend bool operator==(const SecretKey&, const SecretKey&) = default;
};

/// RLWE pair (b, a) = (-a*s + e, a) in NTT form over the full chain.
struct PublicKey {
  Representation rep = Representation::kRns;
  RnsPoly b;
  RnsPoly a;

  friend bool operator==(const PublicKey&, const PublicKey&) = default;
};

struct KeyPair {
  SecretKey secret_key;
  PublicKey public_key;

  friend bool operator==(const KeyPair&, const KeyPair&) = default;
};

}  // namespace pdn::he
