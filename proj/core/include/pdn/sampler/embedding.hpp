// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pdn/sampler/predictor.hpp"

namespace pdn::sampler {

/// Whitespace tokens, truncated to kCondTokens and padded with "<pad>".
std::vector<std::string> tokenize(std::string_view prompt);

/// Client-side prompt embedding. Row r is a unit vector drawn from a
/// generator keyed by (FNV-1a of token r, r, embed_seed), so the same
/// prompt under another seed lands on unrelated vectors. Throws
/// InputError for an empty or all-whitespace prompt.
ConditionTensor embed_prompt(std::string_view prompt, std::uint64_t embed_seed);

std::uint64_t fnv1a(std::string_view text) noexcept;

}  // namespace pdn::sampler
