/* Copyright 2026 The lmfp Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Sentence BLEU: modified n-gram precision for n = 1..4 with uniform weights,
// brevity penalty exp(1 - r/c) when the candidate is shorter, whitespace
// tokens. A zero match count contributes 1e-9 instead of 0. Orders longer than
// the candidate are left out and the remaining weights renormalised, so a
// two-token candidate that equals its reference still scores 1.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lmfp/rs_codec.hpp"

namespace lmfp {

inline constexpr int kBleuMaxOrder = 4;
inline constexpr double kBleuEpsilon = 1e-9;

struct BleuScore {
  double value = 0;
  std::array<double, kBleuMaxOrder> precisions{};  // NaN for orders left out
  double brevity_penalty = 0;
};

namespace detail {

using Gram = std::vector<std::string_view>;

inline std::map<Gram, int> ngram_counts(const std::vector<std::string_view>& toks, std::size_t n) {
  std::map<Gram, int> counts;
  for (std::size_t i = 0; i + n <= toks.size(); ++i) {
    ++counts[Gram(toks.begin() + static_cast<long>(i), toks.begin() + static_cast<long>(i + n))];
  }
  return counts;
}

}  // namespace detail

inline BleuScore bleu(std::string_view candidate, std::string_view reference) {
  const auto ref = split_whitespace(reference);
  if (ref.empty()) throw std::invalid_argument("BLEU reference must be non-empty");
  const auto cand = split_whitespace(candidate);
  BleuScore score;
  score.precisions.fill(std::nan(""));
  if (cand.empty()) return score;

  double log_sum = 0;
  int orders = 0;
  for (std::size_t n = 1; n <= kBleuMaxOrder; ++n) {
    if (cand.size() < n) break;
    const auto c = detail::ngram_counts(cand, n);
    const auto r = detail::ngram_counts(ref, n);
    int matched = 0;
    for (const auto& [gram, count] : c) {
      const auto it = r.find(gram);
      if (it != r.end()) matched += std::min(count, it->second);
    }
    const auto total = static_cast<double>(cand.size() - n + 1);
    const double p = (matched > 0 ? matched : kBleuEpsilon) / total;
    score.precisions[n - 1] = p;
    log_sum += std::log(p);
    ++orders;
  }
  const auto c_len = static_cast<double>(cand.size());
  const auto r_len = static_cast<double>(ref.size());
  score.brevity_penalty = c_len < r_len ? std::exp(1.0 - r_len / c_len) : 1.0;
  score.value = score.brevity_penalty * std::exp(log_sum / orders);
  return score;
}

}  // namespace lmfp
