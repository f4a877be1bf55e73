// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>

#include "pdn/he/params.hpp"

namespace pdn::he {

/// Operations applied to a fresh ciphertext before decryption.
struct OpsProfile {
  std::size_t num_adds = 0;
  /// Each plaintext multiplication is assumed to be followed by a rescale.
  std::size_t num_pt_muls = 0;
  /// Largest |slot| of any plaintext multiplier.
  double max_pt_magnitude = 1.0;
  /// Largest |slot| of the encrypted message itself.
  double max_value_magnitude = 8.0;
  /// Public-key encryption adds u*e + e1*s on top of the symmetric noise.
  bool public_key_encryption = false;
};

/// Conservative bound on max |decoded - exact| over all slots, using a
/// 7-sigma tail on the central-limit estimate of every noise term.
///
/// Non-decreasing in num_adds, num_pt_muls and max_pt_magnitude; strictly
/// increasing in max_pt_magnitude when num_pt_muls >= 1. Throws
/// ParameterError for negative or non-finite magnitudes.
double error_bound(const HeParams& params, const OpsProfile& profile);

}  // namespace pdn::he
