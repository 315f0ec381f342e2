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

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "lmfp/rng.hpp"
#include "lmfp/rs_codec.hpp"

namespace lmfp {
namespace {

// Reference field arithmetic: carry-less multiply then reduce by 0x11d, and
// inverse by exhaustive search. Shares nothing with the table code.
std::uint8_t slow_mul(std::uint8_t a, std::uint8_t b) {
  unsigned acc = 0;
  for (int i = 0; i < 8; ++i) {
    if (b >> i & 1) acc ^= static_cast<unsigned>(a) << i;
  }
  for (int bit = 14; bit >= 8; --bit) {
    if (acc >> bit & 1) acc ^= 0x11du << (bit - 8);
  }
  return static_cast<std::uint8_t>(acc);
}

std::uint8_t slow_inv(std::uint8_t a) {
  for (unsigned x = 1; x < 256; ++x) {
    if (slow_mul(a, static_cast<std::uint8_t>(x)) == 1) return static_cast<std::uint8_t>(x);
  }
  return 0;
}

std::uint8_t slow_point(int j) {
  std::uint8_t x = 1;
  for (int i = 0; i < j; ++i) x = slow_mul(x, 2);
  return x;
}

// Lagrange interpolation of the message through the first k points,
// evaluated at every code point.
std::vector<std::uint8_t> lagrange_codeword(const std::vector<std::uint8_t>& msg, int n) {
  const int k = static_cast<int>(msg.size());
  std::vector<std::uint8_t> out;
  for (int j = 0; j < n; ++j) {
    const std::uint8_t x = slow_point(j);
    std::uint8_t acc = 0;
    for (int i = 0; i < k; ++i) {
      std::uint8_t num = 1, den = 1;
      for (int l = 0; l < k; ++l) {
        if (l == i) continue;
        num = slow_mul(num, x ^ slow_point(l));
        den = slow_mul(den, slow_point(i) ^ slow_point(l));
      }
      acc ^= slow_mul(msg[i], slow_mul(num, slow_inv(den)));
    }
    out.push_back(acc);
  }
  return out;
}

std::vector<std::uint8_t> random_message(Rng& rng, int k) {
  std::vector<std::uint8_t> m(static_cast<std::size_t>(k));
  for (auto& b : m) b = static_cast<std::uint8_t>(rng.below(256));
  return m;
}

std::uint8_t nonzero(Rng& rng) { return static_cast<std::uint8_t>(1 + rng.below(255)); }

TEST(Gf256Test, MultiplicationTableMatchesShiftAndReduce) {
  for (unsigned a = 0; a < 256; ++a) {
    for (unsigned b = 0; b < 256; ++b) {
      ASSERT_EQ(gf::mul(static_cast<gf::Elem>(a), static_cast<gf::Elem>(b)),
                slow_mul(static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b)))
          << a << "*" << b;
    }
  }
}

TEST(Gf256Test, FieldAxioms) {
  for (unsigned a = 1; a < 256; ++a) {
    const auto x = static_cast<gf::Elem>(a);
    EXPECT_EQ(gf::mul(x, gf::inv(x)), 1);
    EXPECT_EQ(gf::inv(x), slow_inv(x));
    EXPECT_EQ(gf::div(x, x), 1);
  }
  Rng rng(3);
  for (int i = 0; i < 5000; ++i) {
    const auto a = static_cast<gf::Elem>(rng.below(256));
    const auto b = static_cast<gf::Elem>(rng.below(256));
    const auto c = static_cast<gf::Elem>(rng.below(256));
    EXPECT_EQ(gf::mul(a, gf::add(b, c)), gf::add(gf::mul(a, b), gf::mul(a, c)));
    EXPECT_EQ(gf::mul(gf::mul(a, b), c), gf::mul(a, gf::mul(b, c)));
  }
  EXPECT_THROW(gf::inv(0), std::domain_error);
  EXPECT_THROW(gf::div(3, 0), std::domain_error);
}

TEST(Gf256Test, GeneratorIsPrimitive) {
  std::vector<bool> seen(256, false);
  for (int i = 0; i < 255; ++i) {
    EXPECT_FALSE(seen[gf::alpha_pow(i)]);
    seen[gf::alpha_pow(i)] = true;
  }
  EXPECT_EQ(gf::alpha_pow(255), 1);
  EXPECT_EQ(gf::alpha_pow(-1), gf::inv(2));
  EXPECT_EQ(gf::pow(3, 0), 1);
  EXPECT_EQ(gf::pow(0, 5), 0);
}

TEST(RsParamsTest, Validation) {
  EXPECT_NO_THROW((RsParams{15, 9}.validate()));
  EXPECT_EQ((RsParams{63, 39}.t()), 12);
  EXPECT_THROW((RsParams{9, 9}.validate()), std::invalid_argument);
  EXPECT_THROW((RsParams{256, 9}.validate()), std::invalid_argument);
  EXPECT_THROW((RsParams{10, 9}.validate()), std::invalid_argument);
  EXPECT_THROW((RsParams{10, 0}.validate()), std::invalid_argument);
}

TEST(RsEncodeTest, MatchesLagrangeOracle) {
  Rng rng(21);
  for (const RsParams p : {RsParams{15, 9}, RsParams{31, 19}, RsParams{63, 39}}) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto msg = random_message(rng, p.k_msg);
      EXPECT_EQ(rs_encode(msg, p).symbols, lagrange_codeword(msg, p.n_code));
    }
  }
}

TEST(RsEncodeTest, ZeroMessageAndSystematicPrefix) {
  const RsParams p{63, 39};
  EXPECT_EQ(rs_encode(std::vector<std::uint8_t>(39, 0), p).symbols,
            std::vector<std::uint8_t>(63, 0));
  Rng rng(2);
  for (int i = 0; i < 100; ++i) {
    const auto msg = random_message(rng, 39);
    const Codeword c = rs_encode(msg, p);
    ASSERT_TRUE(std::equal(msg.begin(), msg.end(), c.symbols.begin()));
    EXPECT_EQ(rs_encode(std::span(c.symbols).first(39), p), c);
  }
}

TEST(RsEncodeTest, WrongLengthIsDomainError) {
  EXPECT_THROW(rs_encode(std::vector<std::uint8_t>(8), RsParams{15, 9}), std::domain_error);
}

TEST(RsEncodeTest, Linearity) {
  const RsParams p{31, 19};
  Rng rng(8);
  const auto a = random_message(rng, 19);
  const auto b = random_message(rng, 19);
  std::vector<std::uint8_t> sum(19);
  for (int i = 0; i < 19; ++i) sum[i] = a[i] ^ b[i];
  const auto ca = rs_encode(a, p).symbols;
  const auto cb = rs_encode(b, p).symbols;
  const auto cs = rs_encode(sum, p).symbols;
  for (int j = 0; j < 31; ++j) EXPECT_EQ(cs[j], ca[j] ^ cb[j]);
}

TEST(RsDecodeTest, CleanWord) {
  const RsParams p{15, 9};
  const std::vector<std::uint8_t> msg{1, 2, 3, 4, 5, 6, 7, 8, 9};
  const DecodeResult r = rs_decode(ReceivedWord::clean(rs_encode(msg, p)), p);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(*r.message, msg);
  EXPECT_EQ(r.errors_corrected, 0);
}

TEST(RsDecodeTest, ExhaustiveThreeErrorPositions) {
  const RsParams p{15, 9};
  Rng rng(99);
  int cases = 0;
  for (int a = 0; a < 15; ++a) {
    for (int b = a + 1; b < 15; ++b) {
      for (int c = b + 1; c < 15; ++c) {
        for (int rep = 0; rep < 50; ++rep) {
          const auto msg = random_message(rng, 9);
          ReceivedWord rw = ReceivedWord::clean(rs_encode(msg, p));
          for (int pos : {a, b, c}) rw.symbols[pos] ^= nonzero(rng);
          const DecodeResult r = rs_decode(rw, p);
          ASSERT_TRUE(r.ok()) << a << "," << b << "," << c << ": " << r.failure;
          ASSERT_EQ(*r.message, msg);
          ASSERT_EQ(r.errors_corrected, 3);
          ++cases;
        }
      }
    }
  }
  EXPECT_EQ(cases, 455 * 50);
}

TEST(RsDecodeTest, FourErrorsFailOrMismatch) {
  const RsParams p{15, 9};
  Rng rng(4);
  int failures = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const auto msg = random_message(rng, 9);
    ReceivedWord rw = ReceivedWord::clean(rs_encode(msg, p));
    std::vector<int> pos(15);
    std::iota(pos.begin(), pos.end(), 0);
    for (int i = 0; i < 4; ++i) std::swap(pos[i], pos[i + rng.below(15 - i)]);
    for (int i = 0; i < 4; ++i) rw.symbols[pos[i]] ^= nonzero(rng);
    const DecodeResult r = rs_decode(rw, p);
    if (r.ok()) {
      // Beyond the radius the decoder may land on another codeword; it can
      // never hand back the original message.
      EXPECT_NE(*r.message, msg);
    } else {
      ++failures;
    }
  }
  EXPECT_GT(failures, 1500);
}

// 2e + s <= n - k over random (e, s) splits.
void contract_trials(const RsParams& p, int trials, std::uint64_t seed) {
  Rng rng(seed);
  const int budget = p.parity();
  for (int trial = 0; trial < trials; ++trial) {
    const int s = static_cast<int>(rng.below(static_cast<std::uint64_t>(budget) + 1));
    const int e = static_cast<int>(rng.below(static_cast<std::uint64_t>((budget - s) / 2) + 1));
    const auto msg = random_message(rng, p.k_msg);
    ReceivedWord rw = ReceivedWord::clean(rs_encode(msg, p));
    std::vector<int> pos(static_cast<std::size_t>(p.n_code));
    std::iota(pos.begin(), pos.end(), 0);
    for (int i = 0; i < e + s; ++i) {
      std::swap(pos[i], pos[i + rng.below(static_cast<std::uint64_t>(p.n_code - i))]);
    }
    for (int i = 0; i < e; ++i) rw.symbols[pos[i]] ^= nonzero(rng);
    for (int i = e; i < e + s; ++i) {
      rw.symbols[pos[i]] = 0;
      rw.erasures[pos[i]] = true;
    }
    const DecodeResult r = rs_decode(rw, p);
    ASSERT_TRUE(r.ok()) << "n=" << p.n_code << " e=" << e << " s=" << s << ": " << r.failure;
    ASSERT_EQ(*r.message, msg) << "e=" << e << " s=" << s;
    ASSERT_EQ(r.erasures, s);
  }
}

TEST(RsDecodeTest, ContractSmall) { contract_trials({15, 9}, 1000, 1); }
TEST(RsDecodeTest, Contract31) { contract_trials({31, 19}, 1000, 2); }
TEST(RsDecodeTest, Contract63) { contract_trials({63, 39}, 1000, 3); }
TEST(RsDecodeTest, Contract255) { contract_trials({255, 223}, 300, 4); }
TEST(RsDecodeTest, ContractDefault) { contract_trials(kDefaultRs, 300, 5); }

TEST(RsDecodeTest, AllErasedAtBudget) {
  const RsParams p{15, 9};
  const std::vector<std::uint8_t> msg{9, 8, 7, 6, 5, 4, 3, 2, 1};
  ReceivedWord rw = ReceivedWord::clean(rs_encode(msg, p));
  for (int i = 0; i < 6; ++i) {
    rw.erasures[i * 2] = true;
    rw.symbols[i * 2] = 0;
  }
  ASSERT_TRUE(rs_decode(rw, p).ok());
  rw.erasures[13] = true;
  EXPECT_FALSE(rs_decode(rw, p).ok());
}

TEST(RsDecodeTest, WrongLengthThrows) {
  ReceivedWord rw{std::vector<std::uint8_t>(14, 0), std::vector<bool>(14, false)};
  EXPECT_THROW(rs_decode(rw, RsParams{15, 9}), std::domain_error);
}

TEST(RenderTest, Format) {
  EXPECT_EQ(render_codeword(Codeword{{0, 255}}), "S00 Sff");
  EXPECT_EQ(render_codeword(Codeword{{0x1a}}), "S1a");
  const RsParams p{63, 39};
  const Codeword c = rs_encode(pad_message("hi", p), p);
  EXPECT_EQ(render_codeword(c).size(), 4u * 63 - 1);
}

TEST(RenderTest, TokenGrammar) {
  EXPECT_EQ(parse_token("S0f"), 0x0f);
  EXPECT_EQ(parse_token("SAB"), 0xab);
  EXPECT_FALSE(parse_token("s0f"));
  EXPECT_FALSE(parse_token("S0g"));
  EXPECT_FALSE(parse_token("S0ff"));
  EXPECT_FALSE(parse_token("S0"));
}

TEST(ParseAlignTest, RoundTrip) {
  const RsParams p{63, 39};
  Rng rng(5);
  const Codeword c = rs_encode(random_message(rng, 39), p);
  for (const Codeword* ref : {static_cast<const Codeword*>(nullptr), &c}) {
    const ReceivedWord rw = parse_and_align(render_codeword(c), p, ref);
    EXPECT_EQ(rw.symbols, c.symbols);
    EXPECT_EQ(rw.erasure_count(), 0);
  }
}

TEST(ParseAlignTest, DeletionsBecomeErasures) {
  const RsParams p{15, 9};
  const Codeword c = rs_encode(std::vector<std::uint8_t>{10, 20, 30, 40, 50, 60, 70, 80, 90}, p);
  const std::string rendered = render_codeword(c);
  const auto tokens = split_whitespace(rendered);
  std::string text;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i == 3 || i == 11) continue;
    text += std::string(tokens[i]) + " ";
  }
  const ReceivedWord rw = parse_and_align(text, p, &c);
  EXPECT_EQ(rw.erasure_count(), 2);
  EXPECT_TRUE(rw.erasures[3]);
  EXPECT_TRUE(rw.erasures[11]);
  const DecodeResult r = rs_decode(rw, p);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.errors_corrected, 0);
}

TEST(ParseAlignTest, EmbeddedInProse) {
  const RsParams p{63, 39};
  const auto msg = pad_message("market rallies on rate cut hopes", p);
  const Codeword c = rs_encode(msg, p);
  const std::string prose(
      "Shares opened higher on Monday as investors weighed fresh data from the labour market "
      "and a string of earnings reports. Analysts said the outlook remained uncertain. ");
  ASSERT_GE(prose.size() + prose.size(), 200u);
  const std::string text = prose + render_codeword(c) + " " + prose;
  const ReceivedWord rw = parse_and_align(text, p, &c);
  EXPECT_EQ(rw.erasure_count(), 0);
  const DecodeResult r = rs_decode(rw, p);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(*r.message, msg);
}

TEST(ParseAlignTest, MalformedTokensAndSurplus) {
  const RsParams p{15, 9};
  const Codeword c = rs_encode(std::vector<std::uint8_t>(9, 7), p);
  const std::string rendered = render_codeword(c);
  const auto tokens = split_whitespace(rendered);
  std::string text;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    std::string tok(tokens[i]);
    if (i == 5) tok[0] = 'Z';  // malformed, position 5 lost
    text += tok + " ";
    if (i == 8) text += "S42 S43 ";  // surplus insertions
  }
  const ReceivedWord rw = parse_and_align(text, p, &c);
  const DecodeResult r = rs_decode(rw, p);
  ASSERT_TRUE(r.ok()) << r.failure;
  EXPECT_EQ(*r.message, std::vector<std::uint8_t>(9, 7));
}

TEST(ParseAlignTest, NoTokensAllErased) {
  const RsParams p{15, 9};
  const ReceivedWord rw = parse_and_align("nothing framed here", p);
  EXPECT_EQ(rw.erasure_count(), 15);
  EXPECT_FALSE(rs_decode(rw, p).ok());
}

TEST(MessageTextTest, PadAndStrip) {
  const RsParams p{15, 9};
  EXPECT_EQ(pad_message("abc", p).size(), 9u);
  EXPECT_EQ(message_text(pad_message("abc", p)), "abc");
  EXPECT_THROW(pad_message("0123456789", p), std::invalid_argument);
}

}  // namespace
}  // namespace lmfp
