// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pdn/distortion.hpp"
#include "pdn/he/params.hpp"
#include "pdn/tensor.hpp"

namespace pdn {

/// Timing of one denoise step under four layouts:
///   Plain   - plaintext step.
///   Enc     - every element in its own ciphertext, the step evaluated op by
///             op (two plaintext multiplies, three plaintext adds).
///   Enc_opt - shape-preserving encrypted tensor batched along the channel
///             axis (H*W ciphertexts of C slots), one multiply and one add.
///   Sparse  - split first, then only the kept values, packed densely.
/// Encryption and decryption are part of every encrypted variant's time.
struct BenchConfig {
  Shape shape{4, 32, 32};
  double threshold = 0.01;
  CostFunction cost = CostFunction::kHill;
  int sampling_steps = 10;
  /// Which sampling step to time.
  int step = 0;
  double eta = 0.0;
  std::uint64_t seed = 1;
  he::HeParams he_params = he::HeParams::defaults();
  int repeats = 1;
  bool run_enc = true;
  bool run_enc_opt = true;
};

struct BenchRow {
  std::string variant;
  int repeat = 0;
  double seconds = 0.0;
  /// Cost + removal + split, included in `seconds` (Sparse only).
  double split_seconds = 0.0;
  std::size_t ciphertexts = 0;
  std::size_t encrypted_values = 0;
  /// Against the Plain result.
  double max_abs_error = 0.0;
};

struct BenchResult {
  BenchConfig config;
  double sparsity = 0.0;
  std::vector<BenchRow> rows;

  /// Median seconds of one variant; NaN when it was not run.
  [[nodiscard]] double median_seconds(const std::string& variant) const;
};

BenchResult run_bench(const BenchConfig& config);

std::string bench_csv(const BenchResult& result);
std::string bench_table(const BenchResult& result);

}  // namespace pdn
