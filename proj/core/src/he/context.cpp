// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "pdn/he/context.hpp"

#include <bit>
#include <numbers>

#include "pdn/errors.hpp"
#include "pdn/he/modarith.hpp"

namespace pdn::he {
namespace {

void bit_reverse_permute(std::vector<std::complex<double>>& vals) {
  const std::size_t n = vals.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1U;
    for (; j & bit; bit >>= 1U) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(vals[i], vals[j]);
  }
}

}  // namespace

SlotEncoder::SlotEncoder(std::size_t ring_degree) : n_(ring_degree), slots_(ring_degree / 2) {
  const std::size_t m = 2 * n_;
  rot_group_.resize(slots_);
  std::size_t five_pow = 1;
  for (std::size_t j = 0; j < slots_; ++j) {
    rot_group_[j] = five_pow;
    five_pow = (five_pow * 5) % m;
  }
  ksi_pows_.resize(m + 1);
  for (std::size_t j = 0; j < m; ++j) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(m);
    ksi_pows_[j] = {std::cos(angle), std::sin(angle)};
  }
  ksi_pows_[m] = ksi_pows_[0];
}

// Complex products are written out by hand: std::complex multiplication
// goes through a NaN-checking library call without -ffast-math.

void SlotEncoder::special_fft(std::vector<std::complex<double>>& vals) const {
  const std::size_t size = vals.size();
  const std::size_t m = 2 * n_;
  bit_reverse_permute(vals);
  for (std::size_t len = 2; len <= size; len <<= 1U) {
    const std::size_t lenh = len >> 1U;
    const std::size_t lenq = len << 2U;
    const std::size_t stride = m / lenq;
    for (std::size_t i = 0; i < size; i += len) {
      for (std::size_t j = 0; j < lenh; ++j) {
        const std::complex<double> w = ksi_pows_[(rot_group_[j] & (lenq - 1)) * stride];
        const std::complex<double> u = vals[i + j];
        const std::complex<double> y = vals[i + j + lenh];
        const std::complex<double> v{y.real() * w.real() - y.imag() * w.imag(),
                                     y.real() * w.imag() + y.imag() * w.real()};
        vals[i + j] = {u.real() + v.real(), u.imag() + v.imag()};
        vals[i + j + lenh] = {u.real() - v.real(), u.imag() - v.imag()};
      }
    }
  }
}

void SlotEncoder::special_ifft(std::vector<std::complex<double>>& vals) const {
  const std::size_t size = vals.size();
  const std::size_t m = 2 * n_;
  for (std::size_t len = size; len >= 2; len >>= 1U) {
    const std::size_t lenh = len >> 1U;
    const std::size_t lenq = len << 2U;
    const std::size_t stride = m / lenq;
    for (std::size_t i = 0; i < size; i += len) {
      for (std::size_t j = 0; j < lenh; ++j) {
        const std::complex<double> w =
            ksi_pows_[(lenq - (rot_group_[j] & (lenq - 1))) * stride];
        const std::complex<double> a = vals[i + j];
        const std::complex<double> b = vals[i + j + lenh];
        const double dr = a.real() - b.real();
        const double di = a.imag() - b.imag();
        vals[i + j] = {a.real() + b.real(), a.imag() + b.imag()};
        vals[i + j + lenh] = {dr * w.real() - di * w.imag(), dr * w.imag() + di * w.real()};
      }
    }
  }
  bit_reverse_permute(vals);
  const double inv = 1.0 / static_cast<double>(size);
  for (auto& v : vals) v = {v.real() * inv, v.imag() * inv};
}

std::vector<double> SlotEncoder::to_coefficients(std::span<const double> values,
                                                 double scale) const {
  std::vector<std::complex<double>> u(slots_, {0.0, 0.0});
  for (std::size_t i = 0; i < values.size(); ++i) u[i] = {values[i], 0.0};
  special_ifft(u);
  std::vector<double> coeffs(n_);
  for (std::size_t i = 0; i < slots_; ++i) {
    coeffs[i] = u[i].real() * scale;
    coeffs[i + slots_] = u[i].imag() * scale;
  }
  return coeffs;
}

std::vector<double> SlotEncoder::to_slots(std::span<const double> coefficients,
                                          double scale) const {
  std::vector<std::complex<double>> u(slots_);
  const double inv = 1.0 / scale;
  for (std::size_t i = 0; i < slots_; ++i) {
    u[i] = {coefficients[i] * inv, coefficients[i + slots_] * inv};
  }
  special_fft(u);
  std::vector<double> out(slots_);
  for (std::size_t i = 0; i < slots_; ++i) out[i] = u[i].real();
  return out;
}

HeContext::HeContext(HeParams params)
    : params_(std::move(params)), encoder_(params_.ring_degree) {
  params_.validate();
  const std::size_t k = params_.moduli.size();
  ntt_.reserve(k);
  for (std::uint64_t q : params_.moduli) ntt_.emplace_back(params_.ring_degree, q);

  partial_mod_.assign(k, {});
  partial_inv_.assign(k, 1);
  partial_.assign(k, 1.0L);
  for (std::size_t i = 0; i < k; ++i) {
    const std::uint64_t qi = params_.moduli[i];
    partial_mod_[i].resize(i + 1);
    std::uint64_t prod = 1 % qi;
    for (std::size_t j = 0; j <= i; ++j) {
      partial_mod_[i][j] = prod;
      if (j < i) prod = mul_mod(prod, params_.moduli[j] % qi, qi);
    }
    partial_inv_[i] = inv_mod(partial_mod_[i][i], qi);
    if (i > 0) partial_[i] = partial_[i - 1] * static_cast<long double>(params_.moduli[i - 1]);
  }

  inv_prime_.assign(k, {});
  for (std::size_t level = 1; level < k; ++level) {
    const std::uint64_t ql = params_.moduli[level];
    for (std::size_t i = 0; i < level; ++i) {
      inv_prime_[level].push_back(inv_mod(ql % params_.moduli[i], params_.moduli[i]));
    }
  }
}

std::vector<double> HeContext::compose_centered(const RnsPoly& coeff_form) const {
  const std::size_t n = coeff_form.ring_degree();
  const std::size_t rows = coeff_form.num_moduli();
  std::vector<BarrettReducer> red;
  for (std::size_t i = 0; i < rows; ++i) red.emplace_back(params_.moduli[i]);
  std::vector<double> out(n);
  std::vector<std::int64_t> digits(rows);
  for (std::size_t c = 0; c < n; ++c) {
    // Balanced mixed-radix (Garner) digits give the centered representative.
    long double value = 0.0L;
    for (std::size_t i = 0; i < rows; ++i) {
      const std::uint64_t qi = params_.moduli[i];
      std::uint64_t acc = 0;
      for (std::size_t j = 0; j < i; ++j) {
        acc = add_mod(acc, red[i].mul(reduce_signed(digits[j], qi), partial_mod_[i][j]), qi);
      }
      const std::uint64_t t = red[i].mul(sub_mod(coeff_form.row(i)[c], acc, qi), partial_inv_[i]);
      digits[i] = center(t, qi);
      value += static_cast<long double>(digits[i]) * partial_[i];
    }
    out[c] = static_cast<double>(value);
  }
  return out;
}

}  // namespace pdn::he
