// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "pdn/wire/bytes.hpp"

#include <cstring>
#include <string>

#include "pdn/errors.hpp"

namespace pdn::wire {

void ByteWriter::put(const void* p, std::size_t n) {
  const auto* b = static_cast<const std::uint8_t*>(p);
  buf_.insert(buf_.end(), b, b + n);
}

void ByteReader::get(void* p, std::size_t n) {
  if (n > remaining()) {
    throw FormatError("truncated buffer: need " + std::to_string(n) + " bytes, " +
                      std::to_string(remaining()) + " left");
  }
  std::memcpy(p, bytes_.data() + pos_, n);
  pos_ += n;
}

std::uint8_t ByteReader::u8() {
  std::uint8_t v = 0;
  get(&v, sizeof v);
  return v;
}

std::uint16_t ByteReader::u16() {
  std::uint16_t v = 0;
  get(&v, sizeof v);
  return v;
}

std::uint32_t ByteReader::u32() {
  std::uint32_t v = 0;
  get(&v, sizeof v);
  return v;
}

std::uint64_t ByteReader::u64() {
  std::uint64_t v = 0;
  get(&v, sizeof v);
  return v;
}

double ByteReader::f64() {
  double v = 0;
  get(&v, sizeof v);
  return v;
}

float ByteReader::f32() {
  float v = 0;
  get(&v, sizeof v);
  return v;
}

void ByteReader::expect_magic(std::string_view tag) {
  const auto got = raw(tag.size());
  if (std::memcmp(got.data(), tag.data(), tag.size()) != 0) {
    throw FormatError("bad magic, expected '" + std::string(tag) + "'");
  }
}

std::span<const std::uint8_t> ByteReader::raw(std::size_t n) {
  if (n > remaining()) {
    throw FormatError("truncated buffer: need " + std::to_string(n) + " bytes, " +
                      std::to_string(remaining()) + " left");
  }
  auto out = bytes_.subspan(pos_, n);
  pos_ += n;
  return out;
}

void ByteReader::u64_array(std::span<std::uint64_t> out) { get(out.data(), out.size_bytes()); }
void ByteReader::f64_array(std::span<double> out) { get(out.data(), out.size_bytes()); }
void ByteReader::u32_array(std::span<std::uint32_t> out) { get(out.data(), out.size_bytes()); }

void ByteReader::expect_end() const {
  if (!at_end()) {
    throw FormatError(std::to_string(remaining()) + " trailing bytes after object");
  }
}

}  // namespace pdn::wire
