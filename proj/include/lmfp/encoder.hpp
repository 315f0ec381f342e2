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

// The frozen keyed encoder E. Every weight is drawn from the HMAC stream of
// its layer seed, so (key, config) fully determines the encoder. Plaintext
// bytes become d-wide blocks; each block goes through N residual layers and
// is rendered as two hex digits per coordinate.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lmfp/keymat.hpp"

namespace lmfp {

enum class Architecture : std::uint32_t {
  kLinearResidual = 0,
  kConvResidual = 1,
  kAttentionResidual = 2,
};

inline std::string_view to_string(Architecture a) {
  switch (a) {
    case Architecture::kLinearResidual: return "linear-residual";
    case Architecture::kConvResidual: return "conv-residual";
    case Architecture::kAttentionResidual: return "attention-residual";
  }
  return "unknown";
}

inline Architecture parse_architecture(std::string_view s) {
  if (s == "linear-residual" || s == "linear") return Architecture::kLinearResidual;
  if (s == "conv-residual" || s == "conv") return Architecture::kConvResidual;
  if (s == "attention-residual" || s == "attention") return Architecture::kAttentionResidual;
  throw std::invalid_argument("unknown encoder architecture: " + std::string(s));
}

inline constexpr double kQuantRange = 2.0;
inline constexpr int kConvTaps = 3;

struct EncoderConfig {
  int num_layers = 2;
  int dim = 32;
  Architecture architecture = Architecture::kLinearResidual;
  double dense_epsilon = 1e-6;
  double weight_bound = 0.9;
  std::size_t max_plaintext_bytes = 512;

  void validate() const {
    if (num_layers < 1) throw std::invalid_argument("encoder needs at least one layer");
    if (dim < 2) throw std::invalid_argument("encoder dim must be >= 2");
    if (!(dense_epsilon > 0)) throw std::invalid_argument("dense_epsilon must be positive");
    if (!(weight_bound > 0 && weight_bound < 1)) {
      throw std::invalid_argument("weight_bound must lie in (0,1)");
    }
    if (max_plaintext_bytes == 0) throw std::invalid_argument("max_plaintext_bytes must be > 0");
  }

  int fan_in() const {
    return architecture == Architecture::kConvResidual ? kConvTaps * dim : dim;
  }

  // Entries are drawn from [-bound, bound] with bound = weight_bound/sqrt(fan_in).
  double entry_bound() const { return weight_bound / std::sqrt(static_cast<double>(fan_in())); }

  friend bool operator==(const EncoderConfig&, const EncoderConfig&) = default;
};

/// Dense row-major matrix.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  double& operator()(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  double operator()(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i) {
      for (int k = 0; k < a.cols; ++k) {
        const double aik = a(i, k);
        for (int j = 0; j < b.cols; ++j) out(i, j) += aik * b(k, j);
      }
    }
    return out;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

// Linear: {W}. Conv: {W} with shape d x 3d, column = in_channel*3 + tap, taps
// at offsets -1, 0, +1. Attention: {W_q, W_k, W_v, W_o}.
struct LayerWeights {
  std::vector<Matrix> blocks;

  friend bool operator==(const LayerWeights&, const LayerWeights&) = default;
};

class Plaintext {
 public:
  explicit Plaintext(std::string text, std::size_t max_bytes = 512) : text_(std::move(text)) {
    if (text_.empty()) throw std::invalid_argument("plaintext must be non-empty");
    if (text_.size() > max_bytes) {
      throw std::invalid_argument("plaintext exceeds " + std::to_string(max_bytes) + " bytes");
    }
  }

  const std::string& text() const { return text_; }

 private:
  std::string text_;
};

struct Ciphertext {
  std::string hex;
  std::size_t block_count = 0;

  friend bool operator==(const Ciphertext&, const Ciphertext&) = default;
};

using Block = std::vector<double>;

/// UTF-8 bytes scaled by 1/256, chunked into d-wide blocks, last block
/// zero-padded.
inline std::vector<Block> text_to_blocks(std::string_view text, int d) {
  if (text.empty()) throw std::invalid_argument("cannot embed empty text");
  std::vector<Block> blocks((text.size() + d - 1) / d, Block(static_cast<std::size_t>(d), 0.0));
  for (std::size_t i = 0; i < text.size(); ++i) {
    blocks[i / d][i % d] = static_cast<unsigned char>(text[i]) / 256.0;
  }
  return blocks;
}

/// Inverse of text_to_blocks; trailing zero padding is dropped.
inline std::string blocks_to_text(const std::vector<Block>& blocks) {
  std::string out;
  for (const auto& b : blocks) {
    for (double v : b) {
      const long byte = std::lround(v * 256.0);
      out.push_back(static_cast<char>(std::clamp(byte, 0L, 255L)));
    }
  }
  while (!out.empty() && out.back() == '\0') out.pop_back();
  return out;
}

inline std::uint8_t quantize(double y) {
  if (!std::isfinite(y)) throw std::logic_error("non-finite encoder activation");
  const double c = std::clamp(y, -kQuantRange, kQuantRange);
  return static_cast<std::uint8_t>(std::lround((c + kQuantRange) / (2 * kQuantRange) * 255.0));
}

class Encoder {
 public:
  Encoder(EncoderConfig config, std::vector<LayerWeights> layers)
      : config_(config), layers_(std::move(layers)) {
    config_.validate();
    if (static_cast<int>(layers_.size()) != config_.num_layers) {
      throw std::invalid_argument("layer count does not match config");
    }
    for (const auto& layer : layers_) {
      const auto shapes = block_shapes(config_);
      if (layer.blocks.size() != shapes.size()) throw std::invalid_argument("bad layer arity");
      for (std::size_t i = 0; i < shapes.size(); ++i) {
        if (layer.blocks[i].rows != shapes[i].first || layer.blocks[i].cols != shapes[i].second) {
          throw std::invalid_argument("bad weight block shape");
        }
      }
    }
  }

  const EncoderConfig& config() const { return config_; }
  const std::vector<LayerWeights>& layers() const { return layers_; }

  static std::vector<std::pair<int, int>> block_shapes(const EncoderConfig& c) {
    switch (c.architecture) {
      case Architecture::kLinearResidual: return {{c.dim, c.dim}};
      case Architecture::kConvResidual: return {{c.dim, kConvTaps * c.dim}};
      case Architecture::kAttentionResidual:
        return {{c.dim, c.dim}, {c.dim, c.dim}, {c.dim, c.dim}, {c.dim, c.dim}};
    }
    return {};
  }

  /// Real-valued forward pass over the block sequence, before clamping.
  std::vector<Block> forward(std::vector<Block> h) const {
    for (const auto& layer : layers_) {
      switch (config_.architecture) {
        case Architecture::kLinearResidual: linear_step(layer, h); break;
        case Architecture::kConvResidual: conv_step(layer, h); break;
        case Architecture::kAttentionResidual: attention_step(layer, h); break;
      }
    }
    return h;
  }

  /// M(K) = (I+W_N)...(I+W_1); linear-residual only.
  Matrix transfer_matrix() const {
    if (config_.architecture != Architecture::kLinearResidual) {
      throw std::logic_error("transfer matrix is defined for linear-residual encoders");
    }
    Matrix m = Matrix::identity(config_.dim);
    for (const auto& layer : layers_) {
      Matrix step = Matrix::identity(config_.dim);
      for (std::size_t i = 0; i < step.data.size(); ++i) step.data[i] += layer.blocks[0].data[i];
      m = step * m;
    }
    return m;
  }

 private:
  static void apply(const Matrix& w, const Block& x, Block& out, int col_stride = 1,
                    int col_offset = 0) {
    for (int r = 0; r < w.rows; ++r) {
      double acc = 0;
      for (std::size_t c = 0; c < x.size(); ++c) {
        acc += w(r, static_cast<int>(c) * col_stride + col_offset) * x[c];
      }
      out[r] += acc;
    }
  }

  void linear_step(const LayerWeights& layer, std::vector<Block>& h) const {
    for (auto& x : h) {
      Block out = x;
      apply(layer.blocks[0], x, out);
      x = std::move(out);
    }
  }

  static double gelu(double x) { return 0.5 * x * (1.0 + std::erf(x / std::sqrt(2.0))); }

  void conv_step(const LayerWeights& layer, std::vector<Block>& h) const {
    const int d = config_.dim;
    const auto& w = layer.blocks[0];
    std::vector<Block> next = h;
    for (std::size_t t = 0; t < h.size(); ++t) {
      Block pre(static_cast<std::size_t>(d), 0.0);
      for (int tap = 0; tap < kConvTaps; ++tap) {
        const long src = static_cast<long>(t) + tap - 1;
        if (src < 0 || src >= static_cast<long>(h.size())) continue;
        apply(w, h[static_cast<std::size_t>(src)], pre, kConvTaps, tap);
      }
      for (int i = 0; i < d; ++i) next[t][i] += gelu(pre[i]);
    }
    h = std::move(next);
  }

  void attention_step(const LayerWeights& layer, std::vector<Block>& h) const {
    const int d = config_.dim;
    const std::size_t len = h.size();
    auto project = [&](const Matrix& w) {
      std::vector<Block> out(len, Block(static_cast<std::size_t>(d), 0.0));
      for (std::size_t t = 0; t < len; ++t) apply(w, h[t], out[t]);
      return out;
    };
    const auto q = project(layer.blocks[0]);
    const auto k = project(layer.blocks[1]);
    const auto v = project(layer.blocks[2]);
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    std::vector<Block> next = h;
    for (std::size_t t = 0; t < len; ++t) {
      std::vector<double> score(len);
      double mx = -INFINITY;
      for (std::size_t s = 0; s < len; ++s) {
        double dot = 0;
        for (int i = 0; i < d; ++i) dot += q[t][i] * k[s][i];
        score[s] = dot * scale;
        mx = std::max(mx, score[s]);
      }
      double z = 0;
      for (auto& sc : score) z += (sc = std::exp(sc - mx));
      Block mixed(static_cast<std::size_t>(d), 0.0);
      for (std::size_t s = 0; s < len; ++s) {
        for (int i = 0; i < d; ++i) mixed[i] += score[s] / z * v[s][i];
      }
      apply(layer.blocks[3], mixed, next[t]);
    }
    h = std::move(next);
  }

  EncoderConfig config_;
  std::vector<LayerWeights> layers_;
};

/// Layer i (1-based) consumes its own HMAC stream in serialisation order;
/// draws with magnitude below dense_epsilon are replaced by later draws.
inline Encoder build_encoder(const SecretKey& key, const EncoderConfig& config) {
  config.validate();
  const double bound = config.entry_bound();
  std::vector<LayerWeights> layers;
  layers.reserve(static_cast<std::size_t>(config.num_layers));
  for (int i = 1; i <= config.num_layers; ++i) {
    Drbg stream(derive_layer_seed(key, i));
    LayerWeights layer;
    for (const auto& [rows, cols] : Encoder::block_shapes(config)) {
      Matrix m(rows, cols);
      for (auto& entry : m.data) {
        double w;
        do {
          w = (2.0 * stream.next() - 1.0) * bound;
        } while (std::abs(w) < config.dense_epsilon);
        entry = w;
      }
      layer.blocks.push_back(std::move(m));
    }
    layers.push_back(std::move(layer));
  }
  return Encoder(config, std::move(layers));
}

inline Ciphertext encode(const Encoder& encoder, const Plaintext& plaintext) {
  const auto& cfg = encoder.config();
  if (plaintext.text().size() > cfg.max_plaintext_bytes) {
    throw std::invalid_argument("plaintext exceeds encoder size bound");
  }
  const auto out = encoder.forward(text_to_blocks(plaintext.text(), cfg.dim));
  Ciphertext ct;
  ct.block_count = out.size();
  Bytes q;
  q.reserve(out.size() * static_cast<std::size_t>(cfg.dim));
  for (const auto& block : out) {
    for (double y : block) q.push_back(quantize(y));
  }
  ct.hex = to_hex(q);
  return ct;
}

inline Ciphertext encode(const Encoder& encoder, std::string_view text) {
  return encode(encoder, Plaintext(std::string(text), encoder.config().max_plaintext_bytes));
}

// ---------------------------------------------------------------------------
// Serialisation: "LMFPENC\0", u32 version, u32 architecture, u32 layers,
// u32 dim, u32 max_plaintext_bytes, f64 dense_epsilon, f64 weight_bound, then
// every weight block of every layer as row-major little-endian f64.
// ---------------------------------------------------------------------------

inline constexpr char kEncoderMagic[8] = {'L', 'M', 'F', 'P', 'E', 'N', 'C', '\0'};
inline constexpr std::uint32_t kEncoderFormatVersion = 1;

namespace detail {

inline void put_u32(Bytes& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

inline void put_f64(Bytes& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t{in_[pos_ + i]} << (8 * i);
    pos_ += 4;
    return v;
  }

  double f64() {
    need(8);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= std::uint64_t{in_[pos_ + i]} << (8 * i);
    pos_ += 8;
    double v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
  }

  std::span<const std::uint8_t> take(std::size_t n) {
    need(n);
    auto s = in_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

  bool done() const { return pos_ == in_.size(); }
  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > in_.size()) throw std::runtime_error("truncated encoder file");
  }

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Bytes serialize(const Encoder& encoder) {
  const auto& c = encoder.config();
  Bytes out(std::begin(kEncoderMagic), std::end(kEncoderMagic));
  detail::put_u32(out, kEncoderFormatVersion);
  detail::put_u32(out, static_cast<std::uint32_t>(c.architecture));
  detail::put_u32(out, static_cast<std::uint32_t>(c.num_layers));
  detail::put_u32(out, static_cast<std::uint32_t>(c.dim));
  detail::put_u32(out, static_cast<std::uint32_t>(c.max_plaintext_bytes));
  detail::put_f64(out, c.dense_epsilon);
  detail::put_f64(out, c.weight_bound);
  for (const auto& layer : encoder.layers()) {
    for (const auto& m : layer.blocks) {
      for (double v : m.data) detail::put_f64(out, v);
    }
  }
  return out;
}

inline Encoder deserialize_encoder(std::span<const std::uint8_t> bytes) {
  detail::Reader in(bytes);
  const auto magic = in.take(sizeof kEncoderMagic);
  if (!std::equal(magic.begin(), magic.end(), std::begin(kEncoderMagic))) {
    throw std::runtime_error("not an encoder file (bad magic)");
  }
  if (const auto version = in.u32(); version != kEncoderFormatVersion) {
    throw std::runtime_error("unsupported encoder format version " + std::to_string(version));
  }
  EncoderConfig c;
  const auto arch = in.u32();
  if (arch > 2) throw std::runtime_error("unknown architecture id in encoder file");
  c.architecture = static_cast<Architecture>(arch);
  c.num_layers = static_cast<int>(in.u32());
  c.dim = static_cast<int>(in.u32());
  c.max_plaintext_bytes = in.u32();
  c.dense_epsilon = in.f64();
  c.weight_bound = in.f64();
  c.validate();
  // Size check before allocating, so a corrupt header cannot request a huge
  // weight buffer.
  unsigned __int128 per_layer = 0;
  for (const auto& [rows, cols] : Encoder::block_shapes(c)) {
    per_layer += static_cast<unsigned __int128>(rows) * static_cast<std::uint64_t>(cols);
  }
  if (per_layer * static_cast<std::uint64_t>(c.num_layers) * 8 != in.remaining()) {
    throw std::runtime_error("encoder file size does not match its header");
  }
  std::vector<LayerWeights> layers(static_cast<std::size_t>(c.num_layers));
  for (auto& layer : layers) {
    for (const auto& [rows, cols] : Encoder::block_shapes(c)) {
      Matrix m(rows, cols);
      for (auto& v : m.data) v = in.f64();
      layer.blocks.push_back(std::move(m));
    }
  }
  if (!in.done()) throw std::runtime_error("trailing bytes in encoder file");
  return Encoder(c, std::move(layers));
}

inline void save_encoder(const Encoder& encoder, const std::string& path) {
  const Bytes bytes = serialize(encoder);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

inline Encoder load_encoder(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  Bytes bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize_encoder(bytes);
}

}  // namespace lmfp
