// Copyright 2026 The pdenoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "pdn/sampler/embedding.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "pdn/errors.hpp"
#include "pdn/random.hpp"

namespace pdn::sampler {

std::uint64_t fnv1a(std::string_view text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<std::string> tokenize(std::string_view prompt) {
  std::vector<std::string> tokens;
  std::istringstream in{std::string(prompt)};
  std::string tok;
  while (tokens.size() < kCondTokens && in >> tok) tokens.push_back(tok);
  if (tokens.empty()) throw InputError("prompt is empty");
  tokens.resize(kCondTokens, "<pad>");
  return tokens;
}

ConditionTensor embed_prompt(std::string_view prompt, std::uint64_t embed_seed) {
  const std::vector<std::string> tokens = tokenize(prompt);
  ConditionTensor cond;
  cond.data.resize(kCondTokens * kCondDim);
  const std::uint64_t key = mix64(embed_seed);
  for (std::size_t r = 0; r < kCondTokens; ++r) {
    Prng rng(mix64(fnv1a(tokens[r]) ^ key ^ mix64(r + 1)));
    std::normal_distribution<double> normal(0.0, 1.0);
    double* row = cond.data.data() + r * kCondDim;
    double norm = 0.0;
    for (std::size_t j = 0; j < kCondDim; ++j) {
      row[j] = normal(rng);
      norm += row[j] * row[j];
    }
    norm = std::sqrt(norm);
    for (std::size_t j = 0; j < kCondDim; ++j) row[j] /= norm;
  }
  return cond;
}

}  // namespace pdn::sampler
