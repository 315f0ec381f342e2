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

// Diffusion / confusion measurements on rendered ciphertexts. The unit of
// change is one hex digit of the ciphertext.

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "lmfp/encoder.hpp"
#include "lmfp/rng.hpp"

namespace lmfp {

inline constexpr int kMinAvalancheTrials = 100;
inline constexpr double kInputAvalancheLow = 0.40;
inline constexpr double kInputAvalancheHigh = 0.60;
inline constexpr double kKeyAvalancheMin = 0.50;

struct AvalancheReport {
  int trials = 0;
  double mean = 0;
  double stddev = 0;
  std::vector<double> fractions;
};

inline AvalancheReport summarize(std::vector<double> fractions) {
  AvalancheReport r;
  r.trials = static_cast<int>(fractions.size());
  if (fractions.empty()) return r;
  double sum = 0;
  for (double f : fractions) sum += f;
  r.mean = sum / r.trials;
  double sq = 0;
  for (double f : fractions) sq += (f - r.mean) * (f - r.mean);
  r.stddev = r.trials > 1 ? std::sqrt(sq / (r.trials - 1)) : 0.0;
  r.fractions = std::move(fractions);
  return r;
}

/// Fraction of differing hex digits over [begin, end) of two equal-length
/// renderings.
inline double hex_diff_fraction(const std::string& a, const std::string& b, std::size_t begin = 0,
                                std::size_t end = std::string::npos) {
  if (a.size() != b.size()) throw std::invalid_argument("ciphertexts differ in length");
  end = std::min(end, a.size());
  if (end <= begin) return 0.0;
  std::size_t diff = 0;
  for (std::size_t i = begin; i < end; ++i) diff += a[i] != b[i];
  return static_cast<double>(diff) / static_cast<double>(end - begin);
}

inline std::string random_printable(Rng& rng, std::size_t len) {
  std::string s(len, ' ');
  for (auto& c : s) c = static_cast<char>(0x20 + rng.below(95));
  return s;
}

inline SecretKey random_key(Rng& rng, int k = kDefaultKeyDigits) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string hex(static_cast<std::size_t>(k), '0');
  for (auto& c : hex) c = kDigits[rng.below(16)];
  return SecretKey(std::move(hex));
}

/// Changed-digit fraction in the block holding `position` when that byte of
/// `text` is bit-flipped (XOR 0xff).
inline double input_flip_fraction(const Encoder& encoder, const std::string& text,
                                  std::size_t position) {
  std::string flipped = text;
  flipped.at(position) = static_cast<char>(static_cast<unsigned char>(flipped[position]) ^ 0xff);
  const auto a = encode(encoder, text);
  const auto b = encode(encoder, flipped);
  const std::size_t width = static_cast<std::size_t>(encoder.config().dim) * 2;
  const std::size_t block = position / static_cast<std::size_t>(encoder.config().dim);
  return hex_diff_fraction(a.hex, b.hex, block * width, (block + 1) * width);
}

/// Diffusion: one-block random printable plaintexts, one byte flipped per
/// trial, fraction of changed hex digits in the affected block.
inline AvalancheReport avalanche_input(const Encoder& encoder, int trials, std::uint64_t seed = 1) {
  if (trials < kMinAvalancheTrials) {
    throw std::invalid_argument("avalanche needs at least " +
                                std::to_string(kMinAvalancheTrials) + " trials");
  }
  Rng rng(mix_seed(seed, 0xa1));
  const auto d = static_cast<std::size_t>(encoder.config().dim);
  std::vector<double> fractions;
  fractions.reserve(static_cast<std::size_t>(trials));
  for (int t = 0; t < trials; ++t) {
    const std::string text = random_printable(rng, d);
    fractions.push_back(input_flip_fraction(encoder, text, rng.below(d)));
  }
  return summarize(std::move(fractions));
}

inline char different_hex_digit(Rng& rng, char current) {
  static constexpr char kDigits[] = "0123456789abcdef";
  char c;
  do {
    c = kDigits[rng.below(16)];
  } while (c == current);
  return c;
}

/// Confusion: random key and plaintext, one key digit changed, encoder
/// rebuilt, fraction of changed hex digits over the whole ciphertext.
inline AvalancheReport avalanche_key(const EncoderConfig& config, int trials,
                                     std::uint64_t seed = 1) {
  if (trials < kMinAvalancheTrials) {
    throw std::invalid_argument("avalanche needs at least " +
                                std::to_string(kMinAvalancheTrials) + " trials");
  }
  Rng rng(mix_seed(seed, 0xb2));
  const auto d = static_cast<std::size_t>(config.dim);
  std::vector<double> fractions;
  fractions.reserve(static_cast<std::size_t>(trials));
  for (int t = 0; t < trials; ++t) {
    const SecretKey key = random_key(rng);
    const std::size_t pos = rng.below(static_cast<std::uint64_t>(key.digits()));
    const SecretKey other = key.with_digit(pos, different_hex_digit(rng, key.hex()[pos]));
    const std::string text = random_printable(rng, d);
    const auto a = encode(build_encoder(key, config), text);
    const auto b = encode(build_encoder(other, config), text);
    fractions.push_back(hex_diff_fraction(a.hex, b.hex));
  }
  return summarize(std::move(fractions));
}

/// Fraction of weight entries that differ between two encoders of equal shape.
inline double weight_difference_fraction(const Encoder& a, const Encoder& b) {
  std::size_t total = 0, diff = 0;
  for (std::size_t l = 0; l < a.layers().size(); ++l) {
    for (std::size_t m = 0; m < a.layers()[l].blocks.size(); ++m) {
      const auto& x = a.layers()[l].blocks[m].data;
      const auto& y = b.layers()[l].blocks[m].data;
      for (std::size_t i = 0; i < x.size(); ++i) diff += x[i] != y[i];
      total += x.size();
    }
  }
  return total ? static_cast<double>(diff) / static_cast<double>(total) : 0.0;
}

}  // namespace lmfp
