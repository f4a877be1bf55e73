// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pdn/he/params.hpp"
#include "pdn/he/types.hpp"
#include "pdn/random.hpp"

namespace pdn::he {

enum class BackendKind {
  /// Leveled RLWE scheme with approximate arithmetic.
  kCkksLite,
  /// Oracle backend: carries slot values verbatim, tracks scale and level
  /// exactly like kCkksLite, and raises the same errors.
  kMockExact,
};

BackendKind parse_backend_kind(std::string_view name);
std::string_view to_string(BackendKind kind);

/// Operation set shared by both backends.
///
/// Public entry points validate their arguments (levels, scales, remaining
/// depth) identically for every backend and then dispatch to the backend's
/// arithmetic, so control flow never depends on which backend is in use.
/// All methods are const and thread-safe; randomness is supplied by the
/// caller through a Prng.
class HeBackend {
 public:
  explicit HeBackend(HeParams params);
  virtual ~HeBackend() = default;

  HeBackend(const HeBackend&) = delete;
  HeBackend& operator=(const HeBackend&) = delete;

  [[nodiscard]] virtual BackendKind kind() const noexcept = 0;
  [[nodiscard]] const HeParams& params() const noexcept { return params_; }
  [[nodiscard]] std::size_t slot_count() const noexcept { return params_.slot_count(); }
  [[nodiscard]] std::size_t top_level() const noexcept { return params_.top_level(); }
  /// q_level as a double; the scale removed by rescaling at that level.
  [[nodiscard]] double prime_at(std::size_t level) const;

  [[nodiscard]] KeyPair keygen(std::uint64_t seed) const;

  [[nodiscard]] Plaintext encode(std::span<const double> values, double scale,
                                 std::size_t level) const;
  /// Same slot value everywhere.
  [[nodiscard]] Plaintext encode_constant(double value, double scale, std::size_t level) const;
  [[nodiscard]] std::vector<double> decode(const Plaintext& pt) const;

  [[nodiscard]] Ciphertext encrypt(const PublicKey& pk, const Plaintext& pt, Prng& rng) const;
  /// Secret-key encryption: c = (-a*s + e + m, a). Lower noise than the
  /// public-key path; available to whoever holds the secret key.
  [[nodiscard]] Ciphertext encrypt_symmetric(const SecretKey& sk, const Plaintext& pt,
                                             Prng& rng) const;
  [[nodiscard]] Plaintext decrypt(const SecretKey& sk, const Ciphertext& ct) const;

  [[nodiscard]] Ciphertext add(const Ciphertext& a, const Ciphertext& b) const;
  [[nodiscard]] Ciphertext add_plain(const Ciphertext& a, const Plaintext& b) const;
  /// Result scale is a.scale * b.scale. Raises DepthError at level 0, since
  /// no prime would be left to rescale the product.
  [[nodiscard]] Ciphertext multiply_plain(const Ciphertext& a, const Plaintext& b) const;
  /// Drops q_level; scale is divided by it.
  [[nodiscard]] Ciphertext rescale(const Ciphertext& a) const;

 protected:
  [[nodiscard]] virtual Representation representation() const noexcept = 0;
  virtual KeyPair do_keygen(std::uint64_t seed) const = 0;
  virtual Plaintext do_encode(std::span<const double> values, double scale,
                              std::size_t level) const = 0;
  virtual Plaintext do_encode_constant(double value, double scale, std::size_t level) const = 0;
  virtual std::vector<double> do_decode(const Plaintext& pt) const = 0;
  virtual Ciphertext do_encrypt(const PublicKey& pk, const Plaintext& pt, Prng& rng) const = 0;
  virtual Ciphertext do_encrypt_symmetric(const SecretKey& sk, const Plaintext& pt,
                                          Prng& rng) const = 0;
  virtual Plaintext do_decrypt(const SecretKey& sk, const Ciphertext& ct) const = 0;
  virtual Ciphertext do_add(const Ciphertext& a, const Ciphertext& b) const = 0;
  virtual Ciphertext do_add_plain(const Ciphertext& a, const Plaintext& b) const = 0;
  virtual Ciphertext do_multiply_plain(const Ciphertext& a, const Plaintext& b) const = 0;
  virtual Ciphertext do_rescale(const Ciphertext& a) const = 0;

 private:
  void check_encode_args(std::size_t count, double max_abs, double scale,
                         std::size_t level) const;
  template <typename T>
  void check_rep(const T& obj, const char* what) const;

  HeParams params_;
};

std::unique_ptr<HeBackend> make_backend(BackendKind kind, const HeParams& params);

/// Relative tolerance when comparing scales of two operands.
inline constexpr double kScaleTolerance = 1e-9;

}  // namespace pdn::he
