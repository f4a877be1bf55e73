// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace pdn::he {

/// Negacyclic number-theoretic transform over Z_q[X]/(X^N + 1).
///
/// forward() takes coefficients in natural order and leaves evaluations in
/// bit-reversed order; inverse() undoes it. Pointwise products of two
/// forward-transformed vectors correspond to negacyclic convolution.
class NttTables {
 public:
  NttTables(std::size_t ring_degree, std::uint64_t modulus);

  void forward(std::span<std::uint64_t> values) const;
  void inverse(std::span<std::uint64_t> values) const;

  [[nodiscard]] std::uint64_t modulus() const noexcept { return q_; }
  [[nodiscard]] std::size_t ring_degree() const noexcept { return n_; }
  /// Primitive 2N-th root of unity used by the transform.
  [[nodiscard]] std::uint64_t psi() const noexcept { return psi_; }

 private:
  std::size_t n_;
  std::uint64_t q_;
  std::uint64_t psi_;
  std::vector<std::uint64_t> psi_rev_;
  std::vector<std::uint64_t> psi_rev_shoup_;
  std::vector<std::uint64_t> psi_inv_rev_;
  std::vector<std::uint64_t> psi_inv_rev_shoup_;
  std::uint64_t n_inv_;
  std::uint64_t n_inv_shoup_;
};

/// Schoolbook negacyclic product, O(N^2). Reference for tests.
std::vector<std::uint64_t> negacyclic_multiply_naive(std::span<const std::uint64_t> a,
                                                     std::span<const std::uint64_t> b,
                                                     std::uint64_t q);

}  // namespace pdn::he
