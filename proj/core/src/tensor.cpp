// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "pdn/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pdn/errors.hpp"

namespace pdn {

Shape parse_shape(const std::string& text) {
  Shape shape;
  std::size_t dims[3] = {0, 0, 0};
  std::size_t pos = 0;
  for (int d = 0; d < 3; ++d) {
    std::size_t end = text.find('x', pos);
    if ((d < 2) != (end != std::string::npos)) {
      throw ConfigError("shape must look like CxHxW, got '" + text + "'");
    }
    const std::string part = text.substr(pos, end == std::string::npos ? end : end - pos);
    if (part.empty() || !std::all_of(part.begin(), part.end(), ::isdigit)) {
      throw ConfigError("shape must look like CxHxW, got '" + text + "'");
    }
    dims[d] = std::stoul(part);
    if (dims[d] == 0) throw ConfigError("shape dimensions must be positive");
    pos = end + 1;
  }
  shape.channels = dims[0];
  shape.height = dims[1];
  shape.width = dims[2];
  return shape;
}

std::string to_string(const Shape& shape) {
  std::ostringstream out;
  out << shape.channels << 'x' << shape.height << 'x' << shape.width;
  return out.str();
}

Tensor::Tensor(Shape shape, double fill) : shape_(shape), data_(shape.numel(), fill) {}

Tensor::Tensor(Shape shape, std::vector<double> values)
    : shape_(shape), data_(std::move(values)) {
  if (data_.size() != shape_.numel()) {
    throw ShapeError("tensor value count " + std::to_string(data_.size()) +
                     " does not match shape " + to_string(shape_));
  }
}

bool Tensor::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

void require_same_shape(const Shape& a, const Shape& b, const char* what) {
  if (a != b) {
    throw ShapeError(std::string(what) + ": shape mismatch " + to_string(a) + " vs " +
                     to_string(b));
  }
}

}  // namespace pdn
