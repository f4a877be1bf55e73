// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace pdn::wire {

static_assert(std::endian::native == std::endian::little,
              "wire formats are little-endian and written with memcpy");

using Bytes = std::vector<std::uint8_t>;

/// Appends little-endian scalars to a byte buffer.
class ByteWriter {
 public:
  ByteWriter() = default;
  explicit ByteWriter(std::size_t reserve) { buf_.reserve(reserve); }

  void u8(std::uint8_t v) { buf_.push_back(v); }
  void u16(std::uint16_t v) { put(&v, sizeof v); }
  void u32(std::uint32_t v) { put(&v, sizeof v); }
  void u64(std::uint64_t v) { put(&v, sizeof v); }
  void f64(double v) { put(&v, sizeof v); }
  void f32(float v) { put(&v, sizeof v); }
  void magic(std::string_view tag) { put(tag.data(), tag.size()); }
  void raw(std::span<const std::uint8_t> bytes) { buf_.insert(buf_.end(), bytes.begin(), bytes.end()); }
  void u64_array(std::span<const std::uint64_t> v) { put(v.data(), v.size_bytes()); }
  void f64_array(std::span<const double> v) { put(v.data(), v.size_bytes()); }
  void u32_array(std::span<const std::uint32_t> v) { put(v.data(), v.size_bytes()); }

  [[nodiscard]] std::size_t size() const noexcept { return buf_.size(); }
  Bytes take() && { return std::move(buf_); }

 private:
  void put(const void* p, std::size_t n);
  Bytes buf_;
};

/// Bounds-checked little-endian reader. Every read past the end throws
/// FormatError.
class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint8_t u8();
  std::uint16_t u16();
  std::uint32_t u32();
  std::uint64_t u64();
  double f64();
  float f32();
  /// Consumes tag.size() bytes and throws FormatError unless they match.
  void expect_magic(std::string_view tag);
  std::span<const std::uint8_t> raw(std::size_t n);
  void u64_array(std::span<std::uint64_t> out);
  void f64_array(std::span<double> out);
  void u32_array(std::span<std::uint32_t> out);

  [[nodiscard]] std::size_t remaining() const noexcept { return bytes_.size() - pos_; }
  [[nodiscard]] bool at_end() const noexcept { return pos_ == bytes_.size(); }
  /// Throws FormatError if unread bytes remain.
  void expect_end() const;

 private:
  void get(void* p, std::size_t n);
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace pdn::wire
