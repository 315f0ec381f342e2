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

// Key material: SHA-256 (FIPS 180-4), HMAC-SHA256 (RFC 2104), secret keys,
// per-layer seed derivation and the HMAC counter-mode stream that feeds every
// weight initialisation in the encoder.

#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lmfp {

using Bytes = std::vector<std::uint8_t>;
using Digest = std::array<std::uint8_t, 32>;

inline std::span<const std::uint8_t> as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

inline std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

inline int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

inline Bytes from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw std::invalid_argument("odd-length hex string");
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const int hi = hex_value(hex[2 * i]);
    const int lo = hex_value(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw std::invalid_argument("non-hex character");
    out[i] = static_cast<std::uint8_t>(hi << 4 | lo);
  }
  return out;
}

// ---------------------------------------------------------------------------
// SHA-256
// ---------------------------------------------------------------------------

class Sha256 {
 public:
  Sha256() { reset(); }

  void reset() {
    state_ = {0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
              0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};
    buffered_ = 0;
    total_bytes_ = 0;
  }

  Sha256& update(std::span<const std::uint8_t> data) {
    total_bytes_ += data.size();
    std::size_t pos = 0;
    if (buffered_ > 0) {
      const std::size_t take = std::min(data.size(), kBlock - buffered_);
      std::memcpy(buffer_.data() + buffered_, data.data(), take);
      buffered_ += take;
      pos = take;
      if (buffered_ < kBlock) return *this;
      compress(buffer_.data());
      buffered_ = 0;
    }
    for (; pos + kBlock <= data.size(); pos += kBlock) compress(data.data() + pos);
    buffered_ = data.size() - pos;
    if (buffered_ > 0) std::memcpy(buffer_.data(), data.data() + pos, buffered_);
    return *this;
  }

  Sha256& update(std::string_view s) { return update(as_bytes(s)); }

  Digest finish() {
    const std::uint64_t bit_len = total_bytes_ * 8;
    std::array<std::uint8_t, kBlock * 2> pad{};
    pad[0] = 0x80;
    const std::size_t rem = buffered_;
    const std::size_t pad_len = (rem < 56 ? 56 - rem : 120 - rem);
    for (int i = 0; i < 8; ++i) {
      pad[pad_len + i] = static_cast<std::uint8_t>(bit_len >> (56 - 8 * i));
    }
    update(std::span<const std::uint8_t>(pad.data(), pad_len + 8));
    Digest out{};
    for (int i = 0; i < 8; ++i) {
      out[4 * i + 0] = static_cast<std::uint8_t>(state_[i] >> 24);
      out[4 * i + 1] = static_cast<std::uint8_t>(state_[i] >> 16);
      out[4 * i + 2] = static_cast<std::uint8_t>(state_[i] >> 8);
      out[4 * i + 3] = static_cast<std::uint8_t>(state_[i]);
    }
    return out;
  }

  static Digest hash(std::span<const std::uint8_t> data) {
    return Sha256().update(data).finish();
  }

 private:
  static constexpr std::size_t kBlock = 64;

  static constexpr std::uint32_t rotr(std::uint32_t x, int n) {
    return (x >> n) | (x << (32 - n));
  }

  void compress(const std::uint8_t* block) {
    static constexpr std::array<std::uint32_t, 64> k = {
        0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1,
        0x923f82a4, 0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3,
        0x72be5d74, 0x80deb1fe, 0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786,
        0x0fc19dc6, 0x240ca1cc, 0x2de92c6f, 0x4a7484aa, 0x5cb0a9dc, 0x76f988da,
        0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7, 0xc6e00bf3, 0xd5a79147,
        0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc, 0x53380d13,
        0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
        0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070,
        0x19a4c116, 0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a,
        0x5b9cca4f, 0x682e6ff3, 0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208,
        0x90befffa, 0xa4506ceb, 0xbef9a3f7, 0xc67178f2};
    std::array<std::uint32_t, 64> w{};
    for (int i = 0; i < 16; ++i) {
      w[i] = std::uint32_t{block[4 * i]} << 24 | std::uint32_t{block[4 * i + 1]} << 16 |
             std::uint32_t{block[4 * i + 2]} << 8 | std::uint32_t{block[4 * i + 3]};
    }
    for (int i = 16; i < 64; ++i) {
      const std::uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
      const std::uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
      w[i] = w[i - 16] + s0 + w[i - 7] + s1;
    }
    std::uint32_t a = state_[0], b = state_[1], c = state_[2], d = state_[3];
    std::uint32_t e = state_[4], f = state_[5], g = state_[6], h = state_[7];
    for (int i = 0; i < 64; ++i) {
      const std::uint32_t s1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
      const std::uint32_t ch = (e & f) ^ (~e & g);
      const std::uint32_t t1 = h + s1 + ch + k[i] + w[i];
      const std::uint32_t s0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
      const std::uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
      const std::uint32_t t2 = s0 + maj;
      h = g;
      g = f;
      f = e;
      e = d + t1;
      d = c;
      c = b;
      b = a;
      a = t1 + t2;
    }
    state_[0] += a;
    state_[1] += b;
    state_[2] += c;
    state_[3] += d;
    state_[4] += e;
    state_[5] += f;
    state_[6] += g;
    state_[7] += h;
  }

  std::array<std::uint32_t, 8> state_{};
  std::array<std::uint8_t, kBlock> buffer_{};
  std::size_t buffered_ = 0;
  std::uint64_t total_bytes_ = 0;
};

// ---------------------------------------------------------------------------
// HMAC-SHA256
// ---------------------------------------------------------------------------

// Keyed hasher with the ipad/opad states absorbed once, so repeated MACs under
// one key cost two compressions per short message.
class HmacSha256 {
 public:
  explicit HmacSha256(std::span<const std::uint8_t> key) {
    std::array<std::uint8_t, 64> block{};
    if (key.size() > block.size()) {
      const Digest kd = Sha256::hash(key);
      std::copy(kd.begin(), kd.end(), block.begin());
    } else {
      std::copy(key.begin(), key.end(), block.begin());
    }
    std::array<std::uint8_t, 64> ipad{}, opad{};
    for (std::size_t i = 0; i < block.size(); ++i) {
      ipad[i] = block[i] ^ 0x36;
      opad[i] = block[i] ^ 0x5c;
    }
    inner_.update(ipad);
    outer_.update(opad);
  }

  Digest mac(std::span<const std::uint8_t> message) const {
    Sha256 inner = inner_;
    const Digest inner_digest = inner.update(message).finish();
    Sha256 outer = outer_;
    return outer.update(inner_digest).finish();
  }

 private:
  Sha256 inner_;
  Sha256 outer_;
};

inline Digest hmac_sha256(std::span<const std::uint8_t> key,
                          std::span<const std::uint8_t> message) {
  return HmacSha256(key).mac(message);
}

inline Digest hmac_sha256(std::string_view key, std::string_view message) {
  return hmac_sha256(as_bytes(key), as_bytes(message));
}

// ---------------------------------------------------------------------------
// Secret keys and seeds
// ---------------------------------------------------------------------------

inline constexpr int kDefaultKeyDigits = 32;

/// Private key K: exactly k lowercase hex digits. The keyspace is 16^k.
class SecretKey {
 public:
  explicit SecretKey(std::string hex_digits) : hex_(std::move(hex_digits)) {
    if (hex_.empty()) throw std::invalid_argument("secret key must be non-empty");
    for (char c : hex_) {
      if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) {
        throw std::invalid_argument("secret key must be lowercase hex: " + hex_);
      }
    }
  }

  const std::string& hex() const { return hex_; }
  int digits() const { return static_cast<int>(hex_.size()); }

  // Copy with digit `pos` replaced by `digit`; the adversarial F3 key.
  SecretKey with_digit(std::size_t pos, char digit) const {
    std::string h = hex_;
    h.at(pos) = digit;
    return SecretKey(std::move(h));
  }

  friend bool operator==(const SecretKey&, const SecretKey&) = default;

 private:
  std::string hex_;
};

/// Draws a key from an entropy byte stream: each byte supplies two hex
/// digits (high nibble first), so k digits consume ceil(k/2) bytes.
inline SecretKey sample_key(std::span<const std::uint8_t> entropy, int k = kDefaultKeyDigits) {
  if (k < 1) throw std::invalid_argument("key length must be >= 1");
  const std::size_t needed = (static_cast<std::size_t>(k) + 1) / 2;
  if (entropy.size() < needed) throw std::runtime_error("entropy exhausted while sampling key");
  std::string hex = to_hex(entropy.first(needed));
  hex.resize(static_cast<std::size_t>(k));
  return SecretKey(std::move(hex));
}

/// Key from the operating system's entropy pool.
inline SecretKey sample_key_os(int k = kDefaultKeyDigits) {
  std::random_device rd;
  Bytes entropy((static_cast<std::size_t>(k) + 1) / 2);
  for (auto& b : entropy) b = static_cast<std::uint8_t>(rd() & 0xff);
  return sample_key(entropy, k);
}

struct LayerSeed {
  std::uint64_t value = 0;
  int layer_index = 1;

  friend bool operator==(const LayerSeed&, const LayerSeed&) = default;
};

/// seed_i = int(HMAC-SHA256(K, str(i))) mod 2^k, K keyed as its ASCII hex
/// string. Moduli wider than 64 bits are capped at 2^64 (the stream seed is
/// an 8-byte word).
inline LayerSeed derive_layer_seed(const SecretKey& key, int layer_index) {
  if (layer_index < 1) throw std::domain_error("layer index must be >= 1");
  const Digest d = hmac_sha256(key.hex(), std::to_string(layer_index));
  std::uint64_t low = 0;
  for (int i = 24; i < 32; ++i) low = low << 8 | d[i];
  const int bits = std::min(key.digits(), 64);
  if (bits < 64) low &= (std::uint64_t{1} << bits) - 1;
  return LayerSeed{low, layer_index};
}

inline void store_be64(std::uint64_t v, std::uint8_t* out) {
  for (int i = 0; i < 8; ++i) out[i] = static_cast<std::uint8_t>(v >> (56 - 8 * i));
}

/// HMAC counter-mode stream. Value j is the top 53 bits of
/// HMAC-SHA256(be64(seed), be64(j)) divided by 2^53.
class Drbg {
 public:
  explicit Drbg(std::uint64_t seed) : mac_(seed_key(seed)) {}
  explicit Drbg(const LayerSeed& seed) : Drbg(seed.value) {}

  double next() { return at(counter_++); }

  double at(std::uint64_t j) const {
    std::array<std::uint8_t, 8> msg{};
    store_be64(j, msg.data());
    const Digest d = mac_.mac(msg);
    std::uint64_t top = 0;
    for (int i = 0; i < 8; ++i) top = top << 8 | d[i];
    return static_cast<double>(top >> 11) * 0x1.0p-53;
  }

  std::uint64_t position() const { return counter_; }

 private:
  static std::array<std::uint8_t, 8> seed_key(std::uint64_t seed) {
    std::array<std::uint8_t, 8> k{};
    store_be64(seed, k.data());
    return k;
  }

  HmacSha256 mac_;
  std::uint64_t counter_ = 0;
};

inline std::vector<double> drbg_stream(const LayerSeed& seed, std::size_t count) {
  Drbg drbg(seed);
  std::vector<double> out(count);
  for (auto& v : out) v = drbg.next();
  return out;
}

/// Deterministic entropy for seeded runs: HMAC counter-mode bytes keyed by the
/// run seed and a purpose label.
inline Bytes seeded_entropy(std::uint64_t seed, std::string_view label, std::size_t n) {
  std::array<std::uint8_t, 8> k{};
  store_be64(seed, k.data());
  HmacSha256 mac(k);
  Bytes out;
  out.reserve(n + 32);
  for (std::uint64_t block = 0; out.size() < n; ++block) {
    std::string msg(label);
    msg.push_back(':');
    msg += std::to_string(block);
    const Digest d = mac.mac(as_bytes(msg));
    out.insert(out.end(), d.begin(), d.end());
  }
  out.resize(n);
  return out;
}

}  // namespace lmfp
