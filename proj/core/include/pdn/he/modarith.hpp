// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace pdn::he {

// All moduli are odd primes below 2^62, so sums of two residues fit in a
// uint64_t and products fit in u128.

__extension__ using u128 = unsigned __int128;

inline std::uint64_t add_mod(std::uint64_t a, std::uint64_t b, std::uint64_t q) noexcept {
  const std::uint64_t s = a + b;
  return s - (q & (0 - static_cast<std::uint64_t>(s >= q)));
}

inline std::uint64_t sub_mod(std::uint64_t a, std::uint64_t b, std::uint64_t q) noexcept {
  return a - b + (q & (0 - static_cast<std::uint64_t>(a < b)));
}

inline std::uint64_t neg_mod(std::uint64_t a, std::uint64_t q) noexcept {
  return a == 0 ? 0 : q - a;
}

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t q) noexcept {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % q);
}

/// floor(w * 2^64 / q), the Shoup companion of a fixed multiplicand w < q.
inline std::uint64_t shoup_precompute(std::uint64_t w, std::uint64_t q) noexcept {
  return static_cast<std::uint64_t>((static_cast<u128>(w) << 64) / q);
}

/// a * w mod q using the precomputed Shoup companion of w.
inline std::uint64_t mul_mod_shoup(std::uint64_t a, std::uint64_t w, std::uint64_t w_shoup,
                                   std::uint64_t q) noexcept {
  const auto hi =
      static_cast<std::uint64_t>((static_cast<u128>(a) * w_shoup) >> 64);
  const std::uint64_t r = a * w - hi * q;
  return r - (q & (0 - static_cast<std::uint64_t>(r >= q)));
}

/// Barrett reduction of products of two residues modulo a fixed q < 2^62.
/// Avoids the 128-bit division behind mul_mod in hot loops.
class BarrettReducer {
 public:
  explicit BarrettReducer(std::uint64_t q) noexcept : q_(q) {
    // floor((2^128 - 1) / q) == floor(2^128 / q) for odd q.
    const u128 ratio = ~static_cast<u128>(0) / q;
    r0_ = static_cast<std::uint64_t>(ratio);
    r1_ = static_cast<std::uint64_t>(ratio >> 64);
  }

  [[nodiscard]] std::uint64_t modulus() const noexcept { return q_; }

  [[nodiscard]] std::uint64_t mul(std::uint64_t a, std::uint64_t b) const noexcept {
    const u128 z = static_cast<u128>(a) * b;
    const auto lo = static_cast<std::uint64_t>(z);
    const auto hi = static_cast<std::uint64_t>(z >> 64);
    const u128 mid = static_cast<u128>(hi) * r0_ + static_cast<u128>(lo) * r1_ +
                     ((static_cast<u128>(lo) * r0_) >> 64);
    const std::uint64_t est = hi * r1_ + static_cast<std::uint64_t>(mid >> 64);
    // The estimate undershoots the quotient by at most 2.
    std::uint64_t r = lo - est * q_;
    r -= q_ & (0 - static_cast<std::uint64_t>(r >= q_));
    r -= q_ & (0 - static_cast<std::uint64_t>(r >= q_));
    return r;
  }

 private:
  std::uint64_t q_;
  std::uint64_t r0_ = 0;
  std::uint64_t r1_ = 0;
};

/// Maps a signed integer into [0, q).
inline std::uint64_t reduce_signed(std::int64_t v, std::uint64_t q) noexcept {
  const std::int64_t r = v % static_cast<std::int64_t>(q);
  return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(q) : r);
}

/// Centered representative of a in (-q/2, q/2].
inline std::int64_t center(std::uint64_t a, std::uint64_t q) noexcept {
  return a > q / 2 ? static_cast<std::int64_t>(a) - static_cast<std::int64_t>(q)
                   : static_cast<std::int64_t>(a);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t q) noexcept;
/// Inverse modulo a prime q (Fermat). a must be nonzero mod q.
std::uint64_t inv_mod(std::uint64_t a, std::uint64_t q) noexcept;

/// Deterministic Miller-Rabin for 64-bit integers.
bool is_prime(std::uint64_t n) noexcept;

/// Generator of the multiplicative group of the prime field Z_q.
std::uint64_t primitive_root(std::uint64_t q);

/// Distinct primes q with q = 1 mod 2*ring_degree and bit length exactly
/// bit_sizes[i], searched downward from 2^bits. Throws ParameterError when a
/// size admits no further prime.
std::vector<std::uint64_t> generate_ntt_primes(std::span<const int> bit_sizes,
                                               std::size_t ring_degree);

}  // namespace pdn::he
