// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "pdn/tensor.hpp"

namespace pdn {

/// Per-element modification cost rho. Nonnegative and finite.
struct CostMatrix {
  Tensor rho;
};

/// d = rho * |x|, elementwise.
struct DistortionMatrix {
  Tensor d;
};

struct RemovalResult {
  /// Flat indices in removal order: ascending d, ties by ascending index.
  std::vector<std::size_t> removed_indices;
  /// Sum of d over removed_indices, accumulated in removal order.
  double spent_distortion = 0.0;
  double whole_distortion = 0.0;
  double threshold = 0.0;
};

/// x == y + z with disjoint supports. y is the part that gets encrypted.
struct SplitPair {
  Tensor y;
  Tensor z;
};

enum class CostFunction { kHill, kUniform };

CostFunction parse_cost_function(std::string_view name);
std::string_view to_string(CostFunction fn);

inline constexpr double kMinCost = 1e-6;
inline constexpr double kMaxCost = 1e6;

/// HILL cost computed per channel: high-pass KB filter, |.| smoothed by a
/// 3x3 mean, reciprocal, then a 15x15 mean. Borders use symmetric (mirror)
/// padding; rho is clamped to [kMinCost, kMaxCost] before and after the
/// last smoothing. Throws InputError on non-finite input.
CostMatrix hill_cost(const Tensor& x);

/// rho == 1 everywhere.
CostMatrix uniform_cost(const Tensor& x);

CostMatrix compute_cost(CostFunction fn, const Tensor& x);

DistortionMatrix distortion_matrix(const Tensor& x, const CostMatrix& cost);
/// Sum of d in row-major order: the distortion of zeroing every element.
double whole_distortion(const DistortionMatrix& dm);

/// Greedy point removal, one minimum per pass. Removes elements in
/// (d, index) order while the running total stays <= threshold * Whole_D.
/// O(n * removed). threshold must lie in [0, 1).
RemovalResult remove_points_basic(const Tensor& x, const CostMatrix& cost, double threshold);

/// Same result as remove_points_basic, bit for bit, in O(n log n): batches
/// every point with d * remain_points < dis_remain, then scans the boundary
/// with partial sorts.
RemovalResult remove_points_fast(const Tensor& x, const CostMatrix& cost, double threshold);

/// Moves removed elements into z. Throws InputError on out-of-range indices.
SplitPair split(const Tensor& x, const RemovalResult& removal);

/// removed / numel: the share of elements left out of the encrypted part.
double removed_fraction(const RemovalResult& removal, const Shape& shape);

}  // namespace pdn
