// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "pdn/he/params.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "pdn/errors.hpp"
#include "pdn/he/modarith.hpp"

namespace pdn::he {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::uint64_t parse_u64(const std::string& s, const char* key) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ParameterError(std::string("bad integer for ") + key + ": '" + s + "'");
  }
  return v;
}

double parse_double(const std::string& s, const char* key) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParameterError(std::string("bad number for ") + key + ": '" + s + "'");
  }
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

HeParams HeParams::defaults() {
  static const HeParams params = [] {
    constexpr std::array<int, 4> bits = {45, 26, 26, 31};
    return make(8192, bits);
  }();
  return params;
}

HeParams HeParams::make(std::size_t ring_degree, std::span<const int> bit_sizes, double scale,
                        double error_stddev) {
  if (ring_degree < 2 || !std::has_single_bit(ring_degree)) {
    throw ParameterError("ring degree must be a power of two, got " +
                         std::to_string(ring_degree));
  }
  HeParams p;
  p.ring_degree = ring_degree;
  p.moduli = generate_ntt_primes(bit_sizes, ring_degree);
  p.scale = scale;
  p.error_stddev = error_stddev;
  p.validate();
  return p;
}

double HeParams::log2_modulus(std::size_t level) const {
  double bits = 0.0;
  for (std::size_t i = 0; i <= level && i < moduli.size(); ++i) {
    bits += std::log2(static_cast<double>(moduli[i]));
  }
  return bits;
}

void HeParams::validate() const {
  if (ring_degree < 2 || !std::has_single_bit(ring_degree)) {
    throw ParameterError("ring degree must be a power of two, got " +
                         std::to_string(ring_degree));
  }
  if (moduli.size() < 2) throw ParameterError("modulus chain needs at least two primes");
  if (moduli.size() > 255) throw ParameterError("modulus chain too long");
  for (std::size_t i = 0; i < moduli.size(); ++i) {
    const std::uint64_t q = moduli[i];
    if (q >= (1ULL << 62) || !is_prime(q)) {
      throw ParameterError("modulus " + std::to_string(q) + " is not a prime below 2^62");
    }
    if ((q - 1) % (2 * ring_degree) != 0) {
      throw ParameterError("modulus " + std::to_string(q) + " is not 1 mod 2N");
    }
    if (std::count(moduli.begin(), moduli.end(), q) != 1) {
      throw ParameterError("modulus chain primes must be distinct");
    }
  }
  if (!(scale > 1.0) || !std::isfinite(scale)) throw ParameterError("scale must be > 1");
  int exponent = 0;
  if (std::frexp(scale, &exponent) != 0.5) throw ParameterError("scale must be a power of two");
  if (!(error_stddev > 0.0) || !std::isfinite(error_stddev)) {
    throw ParameterError("error stddev must be positive");
  }
  const double log_scale = std::log2(scale);
  if (2.0 * log_scale >= log2_modulus(top_level())) {
    throw ParameterError("scale^2 must be below the full chain modulus");
  }
  if (std::log2(static_cast<double>(moduli.front())) <= log_scale + 1.0) {
    throw ParameterError("base prime q_0 leaves no headroom above the scale");
  }
}

std::string HeParams::to_text() const {
  std::ostringstream out;
  out << "ring_degree=" << ring_degree << '\n';
  out << "moduli=";
  for (std::size_t i = 0; i < moduli.size(); ++i) out << (i ? "," : "") << moduli[i];
  out << '\n';
  out << "scale=" << format_double(scale) << '\n';
  out << "error_stddev=" << format_double(error_stddev) << '\n';
  return out.str();
}

HeParams HeParams::from_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParameterError("params line without '=': " + line);
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  for (const char* key : {"ring_degree", "moduli", "scale", "error_stddev"}) {
    if (!kv.contains(key)) throw ParameterError(std::string("params missing key ") + key);
  }
  HeParams p;
  p.ring_degree = parse_u64(kv["ring_degree"], "ring_degree");
  p.moduli.clear();
  std::istringstream primes(kv["moduli"]);
  std::string item;
  while (std::getline(primes, item, ',')) p.moduli.push_back(parse_u64(trim(item), "moduli"));
  p.scale = parse_double(kv["scale"], "scale");
  p.error_stddev = parse_double(kv["error_stddev"], "error_stddev");
  p.validate();
  return p;
}

}  // namespace pdn::he
