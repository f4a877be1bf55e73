// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>

#include "pdn/errors.hpp"
#include "pdn/he/backend.hpp"
#include "pdn/he/context.hpp"
#include "pdn/he/modarith.hpp"

namespace pdn::he {
namespace {

std::vector<std::int64_t> sample_gaussian(std::size_t n, double sigma, Prng& rng) {
  std::normal_distribution<double> normal(0.0, sigma);
  const double cutoff = 6.0 * sigma;
  std::vector<std::int64_t> out(n);
  for (auto& x : out) {
    double v = 0.0;
    do {
      v = std::round(normal(rng));
    } while (std::abs(v) > cutoff);
    x = static_cast<std::int64_t>(v);
  }
  return out;
}

std::vector<std::int64_t> sample_ternary(std::size_t n, Prng& rng) {
  std::uniform_int_distribution<int> pick(-1, 1);
  std::vector<std::int64_t> out(n);
  for (auto& x : out) x = pick(rng);
  return out;
}

/// Ternary with exactly `weight` nonzero entries.
std::vector<std::int64_t> sample_ternary_weight(std::size_t n, std::size_t weight, Prng& rng) {
  std::vector<std::size_t> positions(n);
  std::iota(positions.begin(), positions.end(), 0);
  std::shuffle(positions.begin(), positions.end(), rng);
  std::bernoulli_distribution sign(0.5);
  std::vector<std::int64_t> out(n, 0);
  for (std::size_t i = 0; i < weight; ++i) out[positions[i]] = sign(rng) ? 1 : -1;
  return out;
}

class CkksLiteBackend final : public HeBackend {
 public:
  explicit CkksLiteBackend(const HeParams& params)
      : HeBackend(params), ctx_(HeContext::create(params)) {}

  [[nodiscard]] BackendKind kind() const noexcept override { return BackendKind::kCkksLite; }

 protected:
  [[nodiscard]] Representation representation() const noexcept override {
    return Representation::kRns;
  }

  KeyPair do_keygen(std::uint64_t seed) const override {
    Prng rng(seed);
    const std::size_t n = ctx_->ring_degree();
    const std::size_t rows = params().chain_length();
    KeyPair keys;
    keys.secret_key.s = to_ntt(sample_ternary_weight(n, n / 2, rng), rows);

    RnsPoly a = sample_uniform(rows, rng);
    RnsPoly e = to_ntt(sample_gaussian(n, params().error_stddev, rng), rows);
    RnsPoly b(n, rows);
    for (std::size_t i = 0; i < rows; ++i) {
      const std::uint64_t q = params().moduli[i];
      const BarrettReducer red(q);
      auto br = b.row(i);
      const auto ar = a.row(i);
      const auto sr = keys.secret_key.s.row(i);
      const auto er = e.row(i);
      for (std::size_t j = 0; j < n; ++j) {
        br[j] = add_mod(neg_mod(red.mul(ar[j], sr[j]), q), er[j], q);
      }
    }
    keys.public_key.b = std::move(b);
    keys.public_key.a = std::move(a);
    return keys;
  }

  Plaintext do_encode(std::span<const double> values, double scale,
                      std::size_t level) const override {
    const auto coeffs = ctx_->encoder().to_coefficients(values, scale);
    std::vector<std::int64_t> rounded(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      const double r = std::round(coeffs[i]);
      if (!(std::abs(r) < 0x1p62)) throw EncodingError("encoded coefficient out of range");
      rounded[i] = static_cast<std::int64_t>(r);
    }
    Plaintext pt;
    pt.poly = to_ntt(rounded, level + 1);
    pt.scale = scale;
    pt.level = level;
    return pt;
  }

  Plaintext do_encode_constant(double value, double scale, std::size_t level) const override {
    // A constant slot vector embeds to the constant polynomial, whose NTT is
    // that constant at every evaluation point.
    const auto c = static_cast<std::int64_t>(std::round(value * scale));
    Plaintext pt;
    pt.poly = RnsPoly(ctx_->ring_degree(), level + 1);
    for (std::size_t i = 0; i <= level; ++i) {
      const std::uint64_t r = reduce_signed(c, params().moduli[i]);
      std::fill(pt.poly.row(i).begin(), pt.poly.row(i).end(), r);
    }
    pt.scale = scale;
    pt.level = level;
    return pt;
  }

  std::vector<double> do_decode(const Plaintext& pt) const override {
    RnsPoly coeff = pt.poly;
    for (std::size_t i = 0; i < coeff.num_moduli(); ++i) ctx_->ntt(i).inverse(coeff.row(i));
    const auto values = ctx_->compose_centered(coeff);
    return ctx_->encoder().to_slots(values, pt.scale);
  }

  Ciphertext do_encrypt(const PublicKey& pk, const Plaintext& pt, Prng& rng) const override {
    const std::size_t n = ctx_->ring_degree();
    const std::size_t rows = pt.level + 1;
    const RnsPoly u = to_ntt(sample_ternary(n, rng), rows);
    const RnsPoly e0 = to_ntt(sample_gaussian(n, params().error_stddev, rng), rows);
    const RnsPoly e1 = to_ntt(sample_gaussian(n, params().error_stddev, rng), rows);
    Ciphertext ct;
    ct.c0 = RnsPoly(n, rows);
    ct.c1 = RnsPoly(n, rows);
    for (std::size_t i = 0; i < rows; ++i) {
      const std::uint64_t q = params().moduli[i];
      const BarrettReducer red(q);
      for (std::size_t j = 0; j < n; ++j) {
        const std::uint64_t uj = u.row(i)[j];
        ct.c0.row(i)[j] = add_mod(add_mod(red.mul(pk.b.row(i)[j], uj), e0.row(i)[j], q),
                                  pt.poly.row(i)[j], q);
        ct.c1.row(i)[j] = add_mod(red.mul(pk.a.row(i)[j], uj), e1.row(i)[j], q);
      }
    }
    ct.scale = pt.scale;
    ct.level = pt.level;
    return ct;
  }

  Ciphertext do_encrypt_symmetric(const SecretKey& sk, const Plaintext& pt,
                                  Prng& rng) const override {
    const std::size_t n = ctx_->ring_degree();
    const std::size_t rows = pt.level + 1;
    RnsPoly a = sample_uniform(rows, rng);
    const RnsPoly e = to_ntt(sample_gaussian(n, params().error_stddev, rng), rows);
    Ciphertext ct;
    ct.c0 = RnsPoly(n, rows);
    for (std::size_t i = 0; i < rows; ++i) {
      const std::uint64_t q = params().moduli[i];
      const BarrettReducer red(q);
      for (std::size_t j = 0; j < n; ++j) {
        const std::uint64_t as = red.mul(a.row(i)[j], sk.s.row(i)[j]);
        ct.c0.row(i)[j] = add_mod(sub_mod(e.row(i)[j], as, q), pt.poly.row(i)[j], q);
      }
    }
    ct.c1 = std::move(a);
    ct.scale = pt.scale;
    ct.level = pt.level;
    return ct;
  }

  Plaintext do_decrypt(const SecretKey& sk, const Ciphertext& ct) const override {
    const std::size_t n = ctx_->ring_degree();
    const std::size_t rows = ct.level + 1;
    Plaintext pt;
    pt.poly = RnsPoly(n, rows);
    for (std::size_t i = 0; i < rows; ++i) {
      const std::uint64_t q = params().moduli[i];
      const BarrettReducer red(q);
      for (std::size_t j = 0; j < n; ++j) {
        pt.poly.row(i)[j] =
            add_mod(ct.c0.row(i)[j], red.mul(ct.c1.row(i)[j], sk.s.row(i)[j]), q);
      }
    }
    pt.scale = ct.scale;
    pt.level = ct.level;
    return pt;
  }

  Ciphertext do_add(const Ciphertext& a, const Ciphertext& b) const override {
    Ciphertext out = a;
    add_into(out.c0, b.c0, a.level);
    add_into(out.c1, b.c1, a.level);
    return out;
  }

  Ciphertext do_add_plain(const Ciphertext& a, const Plaintext& b) const override {
    Ciphertext out = a;
    add_into(out.c0, b.poly, a.level);
    return out;
  }

  Ciphertext do_multiply_plain(const Ciphertext& a, const Plaintext& b) const override {
    Ciphertext out = a;
    const std::size_t n = ctx_->ring_degree();
    for (std::size_t i = 0; i <= a.level; ++i) {
      const std::uint64_t q = params().moduli[i];
      const BarrettReducer red(q);
      const auto pr = b.poly.row(i);
      auto r0 = out.c0.row(i);
      auto r1 = out.c1.row(i);
      for (std::size_t j = 0; j < n; ++j) {
        r0[j] = red.mul(r0[j], pr[j]);
        r1[j] = red.mul(r1[j], pr[j]);
      }
    }
    out.scale = a.scale * b.scale;
    return out;
  }

  Ciphertext do_rescale(const Ciphertext& a) const override {
    Ciphertext out = a;
    rescale_poly(out.c0, a.level);
    rescale_poly(out.c1, a.level);
    out.level = a.level - 1;
    out.scale = a.scale / prime_at(a.level);
    return out;
  }

 private:
  RnsPoly to_ntt(const std::vector<std::int64_t>& coeffs, std::size_t rows) const {
    RnsPoly p(ctx_->ring_degree(), rows);
    for (std::size_t i = 0; i < rows; ++i) {
      const std::uint64_t q = params().moduli[i];
      auto r = p.row(i);
      for (std::size_t j = 0; j < coeffs.size(); ++j) r[j] = reduce_signed(coeffs[j], q);
      ctx_->ntt(i).forward(r);
    }
    return p;
  }

  // Uniform residues by masked rejection sampling; every prime is within a
  // factor of two of its bit mask, so fewer than half the draws are lost.
  RnsPoly sample_uniform(std::size_t rows, Prng& rng) const {
    RnsPoly p(ctx_->ring_degree(), rows);
    for (std::size_t i = 0; i < rows; ++i) {
      const std::uint64_t q = params().moduli[i];
      const std::uint64_t mask = std::bit_ceil(q) - 1;
      for (auto& x : p.row(i)) {
        std::uint64_t r = 0;
        do {
          r = rng() & mask;
        } while (r >= q);
        x = r;
      }
    }
    return p;
  }

  void add_into(RnsPoly& acc, const RnsPoly& other, std::size_t level) const {
    for (std::size_t i = 0; i <= level; ++i) {
      const std::uint64_t q = params().moduli[i];
      auto ar = acc.row(i);
      const auto br = other.row(i);
      for (std::size_t j = 0; j < ar.size(); ++j) ar[j] = add_mod(ar[j], br[j], q);
    }
  }

  // (c - [c]_{q_l}) / q_l in every remaining prime, with [.] centered so the
  // division rounds to nearest.
  void rescale_poly(RnsPoly& poly, std::size_t level) const {
    const std::size_t n = ctx_->ring_degree();
    const std::uint64_t ql = params().moduli[level];
    std::vector<std::uint64_t> top(poly.row(level).begin(), poly.row(level).end());
    ctx_->ntt(level).inverse(top);
    std::vector<std::int64_t> centered(n);
    for (std::size_t j = 0; j < n; ++j) centered[j] = center(top[j], ql);

    std::vector<std::uint64_t> tmp(n);
    for (std::size_t i = 0; i < level; ++i) {
      const std::uint64_t q = params().moduli[i];
      for (std::size_t j = 0; j < n; ++j) tmp[j] = reduce_signed(centered[j], q);
      ctx_->ntt(i).forward(tmp);
      const std::uint64_t inv = ctx_->inv_prime(level, i);
      const std::uint64_t inv_shoup = shoup_precompute(inv, q);
      auto r = poly.row(i);
      for (std::size_t j = 0; j < n; ++j) {
        r[j] = mul_mod_shoup(sub_mod(r[j], tmp[j], q), inv, inv_shoup, q);
      }
    }
    poly.truncate(level);
  }

  std::shared_ptr<const HeContext> ctx_;
};

}  // namespace

std::unique_ptr<HeBackend> make_ckks_backend(const HeParams& params) {
  return std::make_unique<CkksLiteBackend>(params);
}

}  // namespace pdn::he
