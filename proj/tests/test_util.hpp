// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "pdn/random.hpp"
#include "pdn/tensor.hpp"

namespace pdn::testing {

inline std::vector<double> uniform_vector(std::size_t n, double lo, double hi, Prng& rng) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

inline Tensor uniform_tensor(const Shape& shape, double lo, double hi, Prng& rng) {
  return Tensor(shape, uniform_vector(shape.numel(), lo, hi, rng));
}

inline Tensor gaussian_tensor(const Shape& shape, std::uint64_t seed) {
  GaussianSource g(seed);
  return g.draw(shape);
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b,
                           std::size_t count) {
  double m = 0.0;
  for (std::size_t i = 0; i < count; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs_diff(const Tensor& a, const Tensor& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace pdn::testing
