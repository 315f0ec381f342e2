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

// Suspect-model channels: the black-box respond(prompt) API queried by the
// judge, plus table-backed stand-ins for fingerprinted and clean models.

#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lmfp/attacks.hpp"
#include "lmfp/encoder.hpp"
#include "lmfp/rs_codec.hpp"

namespace lmfp {

/// The channel could not produce a response. Never a verdict.
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SuspectChannel {
 public:
  virtual ~SuspectChannel() = default;
  /// Must be safe to call concurrently. Throws TransportError.
  virtual std::string respond(const std::string& prompt) const = 0;
};

enum class Scheme {
  kWithRs,     // response is the rendered RS codeword of the plaintext
  kWithoutRs,  // response is the plaintext itself
};

/// Ciphertext hex -> trained response.
class FingerprintTable {
 public:
  void add(std::string prompt, std::string response) {
    entries_.insert_or_assign(std::move(prompt), std::move(response));
  }
  bool erase(const std::string& prompt) { return entries_.erase(prompt) > 0; }

  const std::string* find(const std::string& prompt) const {
    const auto it = entries_.find(prompt);
    return it == entries_.end() ? nullptr : &it->second;
  }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

/// Target response for one plaintext under a scheme.
inline std::string fingerprint_response(std::string_view plaintext, const RsParams& params,
                                        Scheme scheme) {
  if (scheme == Scheme::kWithoutRs) return std::string(plaintext);
  return render_codeword(rs_encode(pad_message(plaintext, params), params));
}

/// One entry per plaintext: encode(x) -> response(x). Throws if a plaintext
/// does not fit the RS message, or if two plaintexts share a ciphertext
/// (inputs a few units apart in one byte can quantize identically).
inline FingerprintTable build_table(const Encoder& encoder, const std::vector<std::string>& plaintexts,
                                    const RsParams& params, Scheme scheme) {
  FingerprintTable table;
  std::map<std::string, const std::string*> owner;
  for (const auto& x : plaintexts) {
    std::string prompt = encode(encoder, x).hex;
    const auto [it, fresh] = owner.emplace(prompt, &x);
    if (!fresh && *it->second != x) {
      throw std::invalid_argument("ciphertext collision between \"" + *it->second + "\" and \"" + x + "\"");
    }
    table.add(std::move(prompt), fingerprint_response(x, params, scheme));
  }
  return table;
}

/// Deterministic lexicon word salad standing in for an unfingerprinted model.
inline std::string base_text(std::uint64_t seed, std::string_view prompt,
                             const Lexicon& lex = Lexicon::bundled()) {
  Rng rng(mix_seed(seed, fnv1a64(prompt)));
  const std::size_t words = 8 + rng.below(13);
  std::string out;
  for (std::size_t i = 0; i < words; ++i) {
    if (i) out.push_back(' ');
    out += lex.words()[rng.below(lex.words().size())];
  }
  return out;
}

/// Exact-hex lookup into an immutable table. Hits pass through the noise
/// attack (seeded per prompt); misses get base_text.
class TableChannel final : public SuspectChannel {
 public:
  explicit TableChannel(std::shared_ptr<const FingerprintTable> table, AttackSpec noise = {},
                        std::uint64_t base_seed = 0)
      : table_(std::move(table)), noise_(noise), base_seed_(base_seed) {
    if (!table_) throw std::invalid_argument("null fingerprint table");
    noise_.validate();
  }

  std::string respond(const std::string& prompt) const override {
    const std::string* hit = table_->find(prompt);
    if (hit == nullptr) return base_text(base_seed_, prompt);
    AttackSpec spec = noise_;
    spec.rng_seed = mix_seed(noise_.rng_seed, fnv1a64(prompt));
    return apply_attack(*hit, spec);
  }

  const FingerprintTable& table() const { return *table_; }
  const std::shared_ptr<const FingerprintTable>& shared_table() const { return table_; }
  const AttackSpec& noise() const { return noise_; }
  std::uint64_t base_seed() const { return base_seed_; }

  TableChannel with_noise(const AttackSpec& noise) const {
    return TableChannel(table_, noise, base_seed_);
  }

 private:
  std::shared_ptr<const FingerprintTable> table_;
  AttackSpec noise_;
  std::uint64_t base_seed_;
};

/// Applies an attack to whatever the inner channel returns.
class AttackedChannel final : public SuspectChannel {
 public:
  AttackedChannel(std::shared_ptr<const SuspectChannel> inner, AttackSpec spec)
      : inner_(std::move(inner)), spec_(spec) {
    spec_.validate();
  }

  std::string respond(const std::string& prompt) const override {
    AttackSpec spec = spec_;
    spec.rng_seed = mix_seed(spec_.rng_seed, fnv1a64(prompt));
    return apply_attack(inner_->respond(prompt), spec);
  }

 private:
  std::shared_ptr<const SuspectChannel> inner_;
  AttackSpec spec_;
};

inline TableChannel oracle_fingerprinted(FingerprintTable table, AttackSpec noise = {},
                                         std::uint64_t base_seed = 0) {
  if (table.empty()) throw std::invalid_argument("fingerprinted oracle needs a non-empty table");
  return TableChannel(std::make_shared<const FingerprintTable>(std::move(table)), noise, base_seed);
}

inline TableChannel oracle_base(std::uint64_t seed) {
  return TableChannel(std::make_shared<const FingerprintTable>(), {}, seed);
}

/// The same channel with one pair erased. Absent entries are a no-op.
inline TableChannel unlearn(const TableChannel& channel, const std::string& prompt) {
  auto table = std::make_shared<FingerprintTable>(channel.table());
  table->erase(prompt);
  return TableChannel(std::move(table), channel.noise(), channel.base_seed());
}

inline TableChannel unlearn(const TableChannel& channel, const Ciphertext& ciphertext) {
  return unlearn(channel, ciphertext.hex);
}

// Single trigger/answer pair, verified by exact string equality. The answer
// is a plain sentence, so it is exposed to every text attack.
inline constexpr std::string_view kBaselineTrigger = "Recite the registered ownership sentence.";
inline constexpr std::string_view kBaselineAnswer =
    "the quiet river keeps an old promise to the green valley and every bright morning "
    "brings a new story";

struct ExactMatchBaseline {
  std::string trigger;
  std::string answer;
  TableChannel channel;
};

inline ExactMatchBaseline baseline_exact_match(std::string trigger = std::string(kBaselineTrigger),
                                               std::string answer = std::string(kBaselineAnswer),
                                               std::uint64_t base_seed = 0) {
  FingerprintTable table;
  table.add(trigger, answer);
  return {std::move(trigger), std::move(answer),
          TableChannel(std::make_shared<const FingerprintTable>(std::move(table)), {}, base_seed)};
}

}  // namespace lmfp
