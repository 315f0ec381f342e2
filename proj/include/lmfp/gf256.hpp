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

// GF(2^8) with primitive polynomial x^8+x^4+x^3+x^2+1 (0x11d), generator 2.

#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>

namespace lmfp::gf {

using Elem = std::uint8_t;

inline constexpr unsigned kPrimitivePoly = 0x11d;
inline constexpr int kOrder = 255;  // multiplicative group order

struct Tables {
  std::array<Elem, 512> exp{};
  std::array<int, 256> log{};
};

constexpr Tables make_tables() {
  Tables t;
  unsigned x = 1;
  for (int i = 0; i < kOrder; ++i) {
    t.exp[i] = static_cast<Elem>(x);
    t.log[x] = i;
    x <<= 1;
    if (x & 0x100) x ^= kPrimitivePoly;
  }
  for (int i = kOrder; i < 512; ++i) t.exp[i] = t.exp[i - kOrder];
  t.log[0] = -1;
  return t;
}

inline constexpr Tables kTables = make_tables();

constexpr Elem add(Elem a, Elem b) { return a ^ b; }

constexpr Elem mul(Elem a, Elem b) {
  if (a == 0 || b == 0) return 0;
  return kTables.exp[kTables.log[a] + kTables.log[b]];
}

inline Elem inv(Elem a) {
  if (a == 0) throw std::domain_error("GF(256) inverse of zero");
  return kTables.exp[kOrder - kTables.log[a]];
}

inline Elem div(Elem a, Elem b) {
  if (b == 0) throw std::domain_error("GF(256) division by zero");
  if (a == 0) return 0;
  return kTables.exp[kTables.log[a] + kOrder - kTables.log[b]];
}

/// alpha^e for any integer e.
constexpr Elem alpha_pow(long e) {
  long r = e % kOrder;
  if (r < 0) r += kOrder;
  return kTables.exp[static_cast<std::size_t>(r)];
}

constexpr Elem pow(Elem a, long e) {
  if (a == 0) return e == 0 ? 1 : 0;
  return alpha_pow(static_cast<long>(kTables.log[a]) * e);
}

}  // namespace lmfp::gf
