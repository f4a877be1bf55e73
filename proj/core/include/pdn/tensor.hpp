// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace pdn {

/// (C, H, W) extent of a latent-style tensor. Flat indices are row-major:
/// index = (c * H + h) * W + w.
struct Shape {
  std::size_t channels = 0;
  std::size_t height = 0;
  std::size_t width = 0;

  [[nodiscard]] constexpr std::size_t numel() const noexcept {
    return channels * height * width;
  }
  [[nodiscard]] constexpr std::size_t plane() const noexcept { return height * width; }
  [[nodiscard]] constexpr std::size_t flat(std::size_t c, std::size_t h,
                                           std::size_t w) const noexcept {
    return (c * height + h) * width + w;
  }

  friend constexpr bool operator==(const Shape&, const Shape&) = default;
};

/// Parses "CxHxW" (e.g. "4x32x32"). Throws ConfigError on malformed input.
Shape parse_shape(const std::string& text);
std::string to_string(const Shape& shape);

/// Dense real tensor of shape (C, H, W) with double storage.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape, double fill = 0.0);
  Tensor(Shape shape, std::vector<double> values);

  [[nodiscard]] const Shape& shape() const noexcept { return shape_; }
  [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
  [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

  [[nodiscard]] std::span<double> values() noexcept { return data_; }
  [[nodiscard]] std::span<const double> values() const noexcept { return data_; }
  [[nodiscard]] const std::vector<double>& storage() const noexcept { return data_; }

  double& operator[](std::size_t i) noexcept { return data_[i]; }
  double operator[](std::size_t i) const noexcept { return data_[i]; }

  double& at(std::size_t c, std::size_t h, std::size_t w) noexcept {
    return data_[shape_.flat(c, h, w)];
  }
  [[nodiscard]] double at(std::size_t c, std::size_t h, std::size_t w) const noexcept {
    return data_[shape_.flat(c, h, w)];
  }

  [[nodiscard]] bool all_finite() const noexcept;

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  Shape shape_{};
  std::vector<double> data_;
};

/// Throws ShapeError naming `what` when the shapes differ.
void require_same_shape(const Shape& a, const Shape& b, const char* what);

}  // namespace pdn
