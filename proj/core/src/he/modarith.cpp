// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "pdn/he/modarith.hpp"

#include <algorithm>
#include <string>

#include "pdn/errors.hpp"

namespace pdn::he {

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t q) noexcept {
  std::uint64_t result = 1 % q;
  base %= q;
  while (exp > 0) {
    if (exp & 1U) result = mul_mod(result, base, q);
    base = mul_mod(base, base, q);
    exp >>= 1U;
  }
  return result;
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t q) noexcept {
  return pow_mod(a, q - 2, q);
}

bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL,
                          31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int r = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++r;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL,
                          31ULL, 37ULL}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t primitive_root(std::uint64_t q) {
  std::vector<std::uint64_t> factors;
  std::uint64_t m = q - 1;
  for (std::uint64_t p = 2; p * p <= m; p += (p == 2 ? 1 : 2)) {
    if (m % p == 0) {
      factors.push_back(p);
      while (m % p == 0) m /= p;
    }
  }
  if (m > 1) factors.push_back(m);

  for (std::uint64_t g = 2; g < q; ++g) {
    const bool generator = std::none_of(factors.begin(), factors.end(), [&](std::uint64_t p) {
      return pow_mod(g, (q - 1) / p, q) == 1;
    });
    if (generator) return g;
  }
  throw ParameterError("no primitive root modulo " + std::to_string(q));
}

std::vector<std::uint64_t> generate_ntt_primes(std::span<const int> bit_sizes,
                                               std::size_t ring_degree) {
  const std::uint64_t step = 2 * static_cast<std::uint64_t>(ring_degree);
  std::vector<std::uint64_t> primes;
  primes.reserve(bit_sizes.size());
  for (int bits : bit_sizes) {
    if (bits < 2 || bits > 61) {
      throw ParameterError("prime bit size must be in [2, 61], got " + std::to_string(bits));
    }
    const std::uint64_t upper = 1ULL << bits;
    const std::uint64_t lower = 1ULL << (bits - 1);
    // Largest candidate below 2^bits that is 1 mod step.
    std::uint64_t candidate = ((upper - 1) / step) * step + 1;
    bool found = false;
    for (; candidate > lower; candidate -= step) {
      if (is_prime(candidate) &&
          std::find(primes.begin(), primes.end(), candidate) == primes.end()) {
        found = true;
        break;
      }
      if (candidate <= step) break;
    }
    if (!found) {
      throw ParameterError("no " + std::to_string(bits) + "-bit prime = 1 mod " +
                           std::to_string(step) + " left");
    }
    primes.push_back(candidate);
  }
  return primes;
}

}  // namespace pdn::he
