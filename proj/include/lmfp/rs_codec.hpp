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

// Reed-Solomon code over GF(2^8) in evaluation form.
//
// Position j (0-based) of a codeword holds f(x_j) with x_j = alpha^j and f the
// unique polynomial of degree < k that takes the message values at the first k
// points. The code is therefore the evaluation code (m(alpha_1), ...,
// m(alpha_n)) and systematic at the same time.
//
// Decoding uses the dual code: with v_j = 1 / prod_{l != j} (x_j - x_l),
// sum_j v_j c_j x_j^i = 0 for i < n-k. Received syndromes are
// S_i = sum_j v_j r_j x_j^i = sum_errors (v_j e_j) x_j^i, which is the usual
// narrow-sense form, so Berlekamp-Massey (seeded with the erasure locator),
// Chien search and Forney apply unchanged; Forney magnitudes are divided by
// v_j at the end.

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lmfp/gf256.hpp"

namespace lmfp {

struct RsParams {
  int n_code = 127;
  int k_msg = 39;

  int parity() const { return n_code - k_msg; }
  int t() const { return parity() / 2; }

  void validate() const {
    if (!(1 <= k_msg && k_msg < n_code && n_code <= gf::kOrder)) {
      throw std::invalid_argument("RS params need 1 <= k < n <= 255");
    }
    if (t() < 1) throw std::invalid_argument("RS params must correct at least one error");
  }

  friend bool operator==(const RsParams&, const RsParams&) = default;
};

// t = 44. See docs/formats.md for why n is 127 rather than 63.
inline constexpr RsParams kDefaultRs{127, 39};

struct Codeword {
  std::vector<std::uint8_t> symbols;

  friend bool operator==(const Codeword&, const Codeword&) = default;
};

struct ReceivedWord {
  std::vector<std::uint8_t> symbols;
  std::vector<bool> erasures;  // flagged positions hold 0

  int erasure_count() const {
    return static_cast<int>(std::count(erasures.begin(), erasures.end(), true));
  }

  static ReceivedWord clean(const Codeword& c) {
    return {c.symbols, std::vector<bool>(c.symbols.size(), false)};
  }
};

struct DecodeResult {
  std::optional<std::vector<std::uint8_t>> message;
  int errors_corrected = 0;
  int erasures = 0;
  std::string failure;

  bool ok() const { return message.has_value(); }
};

class ReedSolomon {
 public:
  explicit ReedSolomon(RsParams params) : params_(params) {
    params_.validate();
    const int n = params_.n_code;
    points_.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) points_[j] = gf::alpha_pow(j);
    multipliers_.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      gf::Elem prod = 1;
      for (int l = 0; l < n; ++l) {
        if (l != j) prod = gf::mul(prod, gf::add(points_[j], points_[l]));
      }
      multipliers_[j] = gf::inv(prod);
    }
  }

  const RsParams& params() const { return params_; }

  Codeword encode(std::span<const std::uint8_t> message) const {
    const int k = params_.k_msg;
    if (static_cast<int>(message.size()) != k) {
      throw std::domain_error("RS message must be exactly " + std::to_string(k) + " bytes");
    }
    // Newton divided differences over the first k points.
    std::vector<gf::Elem> coef(message.begin(), message.end());
    for (int level = 1; level < k; ++level) {
      for (int i = k - 1; i >= level; --i) {
        coef[i] = gf::div(gf::add(coef[i], coef[i - 1]),
                          gf::add(points_[i], points_[i - level]));
      }
    }
    Codeword c;
    c.symbols.assign(message.begin(), message.end());
    for (int j = k; j < params_.n_code; ++j) {
      gf::Elem acc = coef[k - 1];
      for (int i = k - 2; i >= 0; --i) {
        acc = gf::add(gf::mul(acc, gf::add(points_[j], points_[i])), coef[i]);
      }
      c.symbols.push_back(acc);
    }
    return c;
  }

  DecodeResult decode(const ReceivedWord& received) const {
    const int n = params_.n_code;
    const int nsym = params_.parity();
    DecodeResult result;
    if (static_cast<int>(received.symbols.size()) != n ||
        static_cast<int>(received.erasures.size()) != n) {
      throw std::domain_error("received word must have n_code positions");
    }
    std::vector<gf::Elem> r = received.symbols;
    std::vector<int> erased;
    for (int j = 0; j < n; ++j) {
      if (received.erasures[j]) {
        erased.push_back(j);
        r[j] = 0;
      }
    }
    const int s = static_cast<int>(erased.size());
    result.erasures = s;
    if (s > nsym) {
      result.failure = "erasure count exceeds parity";
      return result;
    }

    const auto syn = syndromes(r);

    // Erasure locator Gamma(z) = prod (1 - x_j z).
    std::vector<gf::Elem> lambda{1};
    for (int j : erased) lambda = poly_mul(lambda, {1, points_[j]});
    std::vector<gf::Elem> b = lambda;
    int order = s;
    for (int step = s; step < nsym; ++step) {
      gf::Elem delta = 0;
      for (std::size_t i = 0; i < lambda.size() && static_cast<int>(i) <= step; ++i) {
        delta = gf::add(delta, gf::mul(lambda[i], syn[step - i]));
      }
      b.insert(b.begin(), 0);  // b <- z b
      if (delta == 0) continue;
      std::vector<gf::Elem> next = lambda;
      if (next.size() < b.size()) next.resize(b.size(), 0);
      for (std::size_t i = 0; i < b.size(); ++i) next[i] = gf::add(next[i], gf::mul(delta, b[i]));
      if (2 * order <= step + s) {
        const gf::Elem dinv = gf::inv(delta);
        b = lambda;
        for (auto& x : b) x = gf::mul(x, dinv);
        order = step + 1 + s - order;
      }
      lambda = std::move(next);
    }
    while (lambda.size() > 1 && lambda.back() == 0) lambda.pop_back();
    const int degree = static_cast<int>(lambda.size()) - 1;
    const int errors = degree - s;
    if (degree != order || errors < 0 || 2 * errors + s > nsym) {
      result.failure = "error locator exceeds correction radius";
      return result;
    }

    // Chien search over the n code points.
    std::vector<int> positions;
    for (int j = 0; j < n; ++j) {
      if (poly_eval(lambda, gf::inv(points_[j])) == 0) positions.push_back(j);
    }
    if (static_cast<int>(positions.size()) != degree) {
      result.failure = "error locator roots do not match its degree";
      return result;
    }

    // Omega = S * Lambda mod z^nsym; Forney: Y = X Omega(X^-1) / Lambda'(X^-1).
    std::vector<gf::Elem> omega = poly_mul(syn, lambda);
    omega.resize(static_cast<std::size_t>(nsym));
    std::vector<gf::Elem> dlambda(lambda.size() > 1 ? lambda.size() - 1 : 1, 0);
    for (std::size_t i = 1; i < lambda.size(); i += 2) dlambda[i - 1] = lambda[i];
    for (int j : positions) {
      const gf::Elem xinv = gf::inv(points_[j]);
      const gf::Elem den = poly_eval(dlambda, xinv);
      if (den == 0) {
        result.failure = "repeated error locator root";
        return result;
      }
      const gf::Elem y = gf::div(gf::mul(points_[j], poly_eval(omega, xinv)), den);
      r[j] = gf::add(r[j], gf::div(y, multipliers_[j]));
    }
    for (gf::Elem v : syndromes(r)) {
      if (v != 0) {
        result.failure = "corrected word is not a codeword";
        return result;
      }
    }
    result.errors_corrected = errors;
    result.message.emplace(r.begin(), r.begin() + params_.k_msg);
    return result;
  }

  std::vector<gf::Elem> syndromes(const std::vector<gf::Elem>& r) const {
    std::vector<gf::Elem> syn(static_cast<std::size_t>(params_.parity()), 0);
    for (int j = 0; j < params_.n_code; ++j) {
      if (r[j] == 0) continue;
      const gf::Elem w = gf::mul(multipliers_[j], r[j]);
      gf::Elem xp = 1;
      for (auto& sv : syn) {
        sv = gf::add(sv, gf::mul(w, xp));
        xp = gf::mul(xp, points_[j]);
      }
    }
    return syn;
  }

 private:
  static std::vector<gf::Elem> poly_mul(const std::vector<gf::Elem>& a,
                                        const std::vector<gf::Elem>& b) {
    std::vector<gf::Elem> out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; j < b.size(); ++j) out[i + j] ^= gf::mul(a[i], b[j]);
    }
    return out;
  }

  // Coefficients are low-order first.
  static gf::Elem poly_eval(const std::vector<gf::Elem>& p, gf::Elem x) {
    gf::Elem acc = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = gf::add(gf::mul(acc, x), *it);
    return acc;
  }

  RsParams params_;
  std::vector<gf::Elem> points_;
  std::vector<gf::Elem> multipliers_;
};

inline Codeword rs_encode(std::span<const std::uint8_t> message, const RsParams& params) {
  return ReedSolomon(params).encode(message);
}

inline DecodeResult rs_decode(const ReceivedWord& received, const RsParams& params) {
  return ReedSolomon(params).decode(received);
}

/// Message bytes for a plaintext: its bytes zero-padded to k_msg.
inline std::vector<std::uint8_t> pad_message(std::string_view text, const RsParams& params) {
  if (text.size() > static_cast<std::size_t>(params.k_msg)) {
    throw std::invalid_argument("plaintext longer than RS message length " +
                                std::to_string(params.k_msg));
  }
  std::vector<std::uint8_t> m(text.begin(), text.end());
  m.resize(static_cast<std::size_t>(params.k_msg), 0);
  return m;
}

/// Message bytes back to text; NUL bytes (padding and erasure placeholders)
/// are dropped.
inline std::string message_text(std::span<const std::uint8_t> message) {
  std::string out;
  for (auto b : message) {
    if (b != 0) out.push_back(static_cast<char>(b));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Framed rendering: token := 'S' hexdigit hexdigit, joined by single spaces.
// ---------------------------------------------------------------------------

inline std::string render_codeword(const Codeword& c) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(c.symbols.size() * 4);
  for (std::size_t i = 0; i < c.symbols.size(); ++i) {
    if (i) out.push_back(' ');
    out.push_back('S');
    out.push_back(kDigits[c.symbols[i] >> 4]);
    out.push_back(kDigits[c.symbols[i] & 0xf]);
  }
  return out;
}

inline std::vector<std::string_view> split_whitespace(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  auto space = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; };
  while (i < text.size()) {
    while (i < text.size() && space(text[i])) ++i;
    const std::size_t start = i;
    while (i < text.size() && !space(text[i])) ++i;
    if (i > start) out.push_back(text.substr(start, i - start));
  }
  return out;
}

/// Symbol value of a well-formed framed token, or nullopt.
inline std::optional<std::uint8_t> parse_token(std::string_view tok) {
  auto hex = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  if (tok.size() != 3 || tok[0] != 'S') return std::nullopt;
  const int hi = hex(tok[1]);
  const int lo = hex(tok[2]);
  if (hi < 0 || lo < 0) return std::nullopt;
  return static_cast<std::uint8_t>(hi << 4 | lo);
}

inline std::vector<std::uint8_t> scan_tokens(std::string_view text) {
  std::vector<std::uint8_t> out;
  for (auto tok : split_whitespace(text)) {
    if (auto v = parse_token(tok)) out.push_back(*v);
  }
  return out;
}

/// Recovers a received word from free text.
///
/// With a reference codeword the framed tokens are aligned to positions
/// 0..n-1 by minimum edit distance (match 0, mismatch 1, gap 1): aligned
/// tokens fill their position (a mismatch becomes a symbol error), unmatched
/// positions become erasures and surplus tokens are dropped. Without a
/// reference, tokens fill positions in order and the tail is erased.
inline ReceivedWord parse_and_align(std::string_view text, const RsParams& params,
                                    const Codeword* reference = nullptr) {
  params.validate();
  const auto n = static_cast<std::size_t>(params.n_code);
  const auto tokens = scan_tokens(text);
  ReceivedWord rw{std::vector<std::uint8_t>(n, 0), std::vector<bool>(n, true)};
  if (tokens.empty()) return rw;

  if (reference == nullptr) {
    for (std::size_t j = 0; j < n && j < tokens.size(); ++j) {
      rw.symbols[j] = tokens[j];
      rw.erasures[j] = false;
    }
    return rw;
  }
  if (reference->symbols.size() != n) throw std::invalid_argument("reference length mismatch");

  const auto& ref = reference->symbols;
  const std::size_t m = tokens.size();
  // cost[i][j]: tokens[0..i) against ref[0..j).
  std::vector<std::vector<int>> cost(m + 1, std::vector<int>(n + 1, 0));
  for (std::size_t i = 0; i <= m; ++i) cost[i][0] = static_cast<int>(i);
  for (std::size_t j = 0; j <= n; ++j) cost[0][j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      const int diag = cost[i - 1][j - 1] + (tokens[i - 1] == ref[j - 1] ? 0 : 1);
      cost[i][j] = std::min({diag, cost[i - 1][j] + 1, cost[i][j - 1] + 1});
    }
  }
  std::size_t i = m, j = n;
  while (i > 0 && j > 0) {
    const int diag = cost[i - 1][j - 1] + (tokens[i - 1] == ref[j - 1] ? 0 : 1);
    if (cost[i][j] == diag) {
      rw.symbols[j - 1] = tokens[i - 1];
      rw.erasures[j - 1] = false;
      --i;
      --j;
    } else if (cost[i][j] == cost[i - 1][j] + 1) {
      --i;  // surplus token
    } else {
      --j;  // position left erased
    }
  }
  return rw;
}

}  // namespace lmfp
