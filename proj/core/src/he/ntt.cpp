// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "pdn/he/ntt.hpp"

#include <bit>
#include <string>

#include "pdn/errors.hpp"
#include "pdn/he/modarith.hpp"

namespace pdn::he {
namespace {

std::size_t bit_reverse(std::size_t x, int bits) {
  std::size_t r = 0;
  for (int i = 0; i < bits; ++i) {
    r = (r << 1U) | (x & 1U);
    x >>= 1U;
  }
  return r;
}

}  // namespace

NttTables::NttTables(std::size_t ring_degree, std::uint64_t modulus)
    : n_(ring_degree), q_(modulus) {
  if (n_ < 2 || !std::has_single_bit(n_)) {
    throw ParameterError("ring degree must be a power of two >= 2");
  }
  if ((q_ - 1) % (2 * n_) != 0 || !is_prime(q_)) {
    throw ParameterError("modulus " + std::to_string(q_) + " is not an NTT-friendly prime");
  }
  const std::uint64_t g = primitive_root(q_);
  psi_ = pow_mod(g, (q_ - 1) / (2 * n_), q_);
  const std::uint64_t psi_inv = inv_mod(psi_, q_);
  const int log_n = std::countr_zero(n_);

  psi_rev_.resize(n_);
  psi_inv_rev_.resize(n_);
  psi_rev_shoup_.resize(n_);
  psi_inv_rev_shoup_.resize(n_);
  std::uint64_t power = 1;
  std::uint64_t inv_power = 1;
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t r = bit_reverse(i, log_n);
    psi_rev_[r] = power;
    psi_inv_rev_[r] = inv_power;
    power = mul_mod(power, psi_, q_);
    inv_power = mul_mod(inv_power, psi_inv, q_);
  }
  for (std::size_t i = 0; i < n_; ++i) {
    psi_rev_shoup_[i] = shoup_precompute(psi_rev_[i], q_);
    psi_inv_rev_shoup_[i] = shoup_precompute(psi_inv_rev_[i], q_);
  }
  n_inv_ = inv_mod(static_cast<std::uint64_t>(n_) % q_, q_);
  n_inv_shoup_ = shoup_precompute(n_inv_, q_);
}

// Both transforms use lazy (Harvey) butterflies: intermediate values live
// in [0, 4q) or [0, 2q) and are reduced once at the end. Moduli are below
// 2^62, so 4q fits in a word.

void NttTables::forward(std::span<std::uint64_t> values) const {
  // Cooley-Tukey butterflies, merged with the psi pre-twist.
  std::uint64_t* a = values.data();
  const std::uint64_t q = q_;
  const std::uint64_t two_q = 2 * q;
  const std::uint64_t* psi = psi_rev_.data();
  const std::uint64_t* psi_shoup = psi_rev_shoup_.data();
  std::size_t t = n_;
  for (std::size_t m = 1; m < n_; m <<= 1U) {
    t >>= 1U;
    for (std::size_t i = 0; i < m; ++i) {
      const std::uint64_t w = psi[m + i];
      const std::uint64_t ws = psi_shoup[m + i];
      std::uint64_t* x = a + 2 * i * t;
      std::uint64_t* y = x + t;
      for (std::size_t j = 0; j < t; ++j) {
        std::uint64_t u = x[j];
        u -= two_q & (0 - static_cast<std::uint64_t>(u >= two_q));
        const auto hi = static_cast<std::uint64_t>((static_cast<u128>(y[j]) * ws) >> 64);
        const std::uint64_t v = y[j] * w - hi * q;  // in [0, 2q)
        x[j] = u + v;
        y[j] = u - v + two_q;
      }
    }
  }
  for (std::size_t j = 0; j < n_; ++j) {
    std::uint64_t r = a[j];
    r -= two_q & (0 - static_cast<std::uint64_t>(r >= two_q));
    a[j] = r - (q & (0 - static_cast<std::uint64_t>(r >= q)));
  }
}

void NttTables::inverse(std::span<std::uint64_t> values) const {
  // Gentleman-Sande butterflies, merged with the psi^-1 post-twist.
  std::uint64_t* a = values.data();
  const std::uint64_t q = q_;
  const std::uint64_t two_q = 2 * q;
  const std::uint64_t* psi = psi_inv_rev_.data();
  const std::uint64_t* psi_shoup = psi_inv_rev_shoup_.data();
  std::size_t t = 1;
  for (std::size_t m = n_; m > 1; m >>= 1U) {
    const std::size_t h = m >> 1U;
    for (std::size_t i = 0; i < h; ++i) {
      const std::uint64_t w = psi[h + i];
      const std::uint64_t ws = psi_shoup[h + i];
      std::uint64_t* x = a + 2 * i * t;
      std::uint64_t* y = x + t;
      for (std::size_t j = 0; j < t; ++j) {
        const std::uint64_t u = x[j];
        const std::uint64_t v = y[j];
        std::uint64_t s = u + v;
        s -= two_q & (0 - static_cast<std::uint64_t>(s >= two_q));
        x[j] = s;
        const std::uint64_t d = u - v + two_q;
        const auto hi = static_cast<std::uint64_t>((static_cast<u128>(d) * ws) >> 64);
        y[j] = d * w - hi * q;
      }
    }
    t <<= 1U;
  }
  const std::uint64_t n_inv = n_inv_;
  const std::uint64_t n_inv_shoup = n_inv_shoup_;
  for (std::size_t j = 0; j < n_; ++j) a[j] = mul_mod_shoup(a[j], n_inv, n_inv_shoup, q);
}

std::vector<std::uint64_t> negacyclic_multiply_naive(std::span<const std::uint64_t> a,
                                                     std::span<const std::uint64_t> b,
                                                     std::uint64_t q) {
  const std::size_t n = a.size();
  std::vector<std::uint64_t> out(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::uint64_t p = mul_mod(a[i], b[j], q);
      const std::size_t k = i + j;
      if (k < n) {
        out[k] = add_mod(out[k], p, q);
      } else {
        out[k - n] = sub_mod(out[k - n], p, q);
      }
    }
  }
  return out;
}

}  // namespace pdn::he
