// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "pdn/he/ntt.hpp"
#include "pdn/he/params.hpp"
#include "pdn/he/types.hpp"

namespace pdn::he {

/// Canonical embedding restricted to the N/2 slots indexed by the rotation
/// group generated by 5. Slot k is the evaluation m(zeta^(5^k)) with
/// zeta = exp(i*pi/N).
class SlotEncoder {
 public:
  explicit SlotEncoder(std::size_t ring_degree);

  /// Real coefficient vector (length N, before rounding) whose slots equal
  /// scale * values. Missing slots are zero.
  [[nodiscard]] std::vector<double> to_coefficients(std::span<const double> values,
                                                    double scale) const;
  /// Real parts of the slots of the given coefficient vector, divided by scale.
  [[nodiscard]] std::vector<double> to_slots(std::span<const double> coefficients,
                                             double scale) const;

  [[nodiscard]] std::size_t slot_count() const noexcept { return slots_; }

 private:
  void special_fft(std::vector<std::complex<double>>& vals) const;
  void special_ifft(std::vector<std::complex<double>>& vals) const;

  std::size_t n_;
  std::size_t slots_;
  std::vector<std::size_t> rot_group_;
  std::vector<std::complex<double>> ksi_pows_;
};

/// Precomputed tables for one parameter set. Immutable and shareable.
class HeContext {
 public:
  explicit HeContext(HeParams params);

  static std::shared_ptr<const HeContext> create(const HeParams& params) {
    return std::make_shared<const HeContext>(params);
  }

  [[nodiscard]] const HeParams& params() const noexcept { return params_; }
  [[nodiscard]] std::size_t ring_degree() const noexcept { return params_.ring_degree; }
  [[nodiscard]] const NttTables& ntt(std::size_t i) const { return ntt_[i]; }
  [[nodiscard]] const SlotEncoder& encoder() const noexcept { return encoder_; }

  /// Centered integer value of each coefficient of an RNS polynomial given in
  /// coefficient form (not NTT form), as a double.
  [[nodiscard]] std::vector<double> compose_centered(const RnsPoly& coeff_form) const;

  /// q_level^-1 mod q_i for i < level.
  [[nodiscard]] std::uint64_t inv_prime(std::size_t level, std::size_t i) const {
    return inv_prime_[level][i];
  }

 private:
  HeParams params_;
  std::vector<NttTables> ntt_;
  SlotEncoder encoder_;
  // Garner tables: partial_mod_[i][j] = (q_0 * ... * q_{j-1}) mod q_i for j <= i,
  // partial_inv_[i] = (q_0 * ... * q_{i-1})^-1 mod q_i, partial_[j] as long double.
  std::vector<std::vector<std::uint64_t>> partial_mod_;
  std::vector<std::uint64_t> partial_inv_;
  std::vector<long double> partial_;
  std::vector<std::vector<std::uint64_t>> inv_prime_;
};

}  // namespace pdn::he
