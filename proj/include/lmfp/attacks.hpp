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

// Seeded response manipulations applied between a suspect model and the
// verifier. All kinds except `none` re-join whitespace tokens with single
// spaces.
//
// strength is the fraction of whitespace tokens touched, rounded up:
//   word-delete        removes ceil(s*N) tokens
//   word-insert        inserts ceil(s*N) lexicon words
//   synonym            swaps up to ceil(s*N) lexicon tokens for their synonym
//   paraphrase-approx  synonym, then swaps one adjacent clause pair (, ; .)
//   copy-paste         ceil(s*N) prose words on each side (at least one)
//   homoglyph          one confusable character replaced in ceil(s*N) tokens
//   temperature-noise  each token replaced with probability s: framed tokens
//                      by a different framed token, others by a lexicon word

#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lmfp/bundled_data.hpp"
#include "lmfp/rng.hpp"
#include "lmfp/rs_codec.hpp"

namespace lmfp {

enum class AttackKind {
  kNone,
  kWordDelete,
  kWordInsert,
  kSynonym,
  kParaphraseApprox,
  kCopyPaste,
  kHomoglyph,
  kTemperatureNoise,
};

inline constexpr AttackKind kAllAttacks[] = {
    AttackKind::kWordDelete, AttackKind::kWordInsert, AttackKind::kSynonym,
    AttackKind::kParaphraseApprox, AttackKind::kCopyPaste, AttackKind::kHomoglyph,
    AttackKind::kTemperatureNoise,
};

inline std::string_view to_string(AttackKind k) {
  switch (k) {
    case AttackKind::kNone: return "none";
    case AttackKind::kWordDelete: return "word-delete";
    case AttackKind::kWordInsert: return "word-insert";
    case AttackKind::kSynonym: return "synonym";
    case AttackKind::kParaphraseApprox: return "paraphrase-approx";
    case AttackKind::kCopyPaste: return "copy-paste";
    case AttackKind::kHomoglyph: return "homoglyph";
    case AttackKind::kTemperatureNoise: return "temperature-noise";
  }
  return "?";
}

inline AttackKind parse_attack_kind(std::string_view s) {
  if (s == "none") return AttackKind::kNone;
  for (AttackKind k : kAllAttacks) {
    if (to_string(k) == s) return k;
  }
  throw std::domain_error("unknown attack kind: " + std::string(s));
}

struct AttackSpec {
  AttackKind kind = AttackKind::kNone;
  double strength = 0;
  std::uint64_t rng_seed = 0;

  void validate() const {
    if (!(strength >= 0 && strength <= 1)) {
      throw std::invalid_argument("attack strength must lie in [0,1]");
    }
  }
};

// ---------------------------------------------------------------------------
// Bundled tables
// ---------------------------------------------------------------------------

/// Synonym pairs, usable in both directions. Also the word pool for inserted
/// and prose text.
class Lexicon {
 public:
  static Lexicon parse(std::string_view tsv) {
    Lexicon lex;
    for_each_row(tsv, [&](std::string_view a, std::string_view b) {
      lex.synonyms_.emplace(std::string(a), std::string(b));
      lex.synonyms_.emplace(std::string(b), std::string(a));
    });
    for (const auto& [word, syn] : lex.synonyms_) lex.words_.push_back(word);
    if (lex.words_.empty()) throw std::invalid_argument("empty synonym lexicon");
    return lex;
  }

  static const Lexicon& bundled() {
    static const Lexicon lex = parse(bundled::kSynonymsTsv);
    return lex;
  }

  const std::string* synonym(std::string_view word) const {
    const auto it = synonyms_.find(std::string(word));
    return it == synonyms_.end() ? nullptr : &it->second;
  }

  const std::vector<std::string>& words() const { return words_; }

  /// Calls fn(col0, col1) for every non-comment row with at least two
  /// tab-separated columns.
  template <typename Fn>
  static void for_each_row(std::string_view tsv, Fn fn) {
    std::size_t pos = 0;
    while (pos < tsv.size()) {
      std::size_t eol = tsv.find('\n', pos);
      if (eol == std::string_view::npos) eol = tsv.size();
      std::string_view line = tsv.substr(pos, eol - pos);
      pos = eol + 1;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (line.empty() || line.front() == '#') continue;
      const std::size_t tab = line.find('\t');
      if (tab == std::string_view::npos) throw std::invalid_argument("malformed table row");
      std::string_view second = line.substr(tab + 1);
      second = second.substr(0, second.find('\t'));
      fn(line.substr(0, tab), second);
    }
  }

 private:
  std::map<std::string, std::string> synonyms_;
  std::vector<std::string> words_;
};

/// ASCII character -> visually confusable UTF-8 sequence.
class Confusables {
 public:
  static Confusables parse(std::string_view tsv) {
    Confusables c;
    Lexicon::for_each_row(tsv, [&](std::string_view from, std::string_view to) {
      if (from.size() != 1 || to.empty()) throw std::invalid_argument("malformed confusable row");
      c.map_[static_cast<unsigned char>(from[0])] = std::string(to);
    });
    return c;
  }

  static const Confusables& bundled() {
    static const Confusables c = parse(bundled::kConfusablesTsv);
    return c;
  }

  const std::string* lookup(char c) const {
    const auto it = map_.find(static_cast<unsigned char>(c));
    return it == map_.end() ? nullptr : &it->second;
  }

  std::size_t size() const { return map_.size(); }

 private:
  std::map<unsigned char, std::string> map_;
};

// ---------------------------------------------------------------------------
// Attacks
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<std::string> tokens_of(std::string_view text) {
  std::vector<std::string> out;
  for (auto t : split_whitespace(text)) out.emplace_back(t);
  return out;
}

inline std::string join(const std::vector<std::string>& toks) {
  std::string out;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (i) out.push_back(' ');
    out += toks[i];
  }
  return out;
}

inline std::size_t affected(double strength, std::size_t n) {
  return std::min(n, static_cast<std::size_t>(std::ceil(strength * static_cast<double>(n) - 1e-12)));
}

// First `count` entries of a seeded shuffle of [0, n).
inline std::vector<std::size_t> pick(Rng& rng, std::size_t n, std::size_t count) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = 0; i < count && i < n; ++i) {
    std::swap(idx[i], idx[i + rng.below(n - i)]);
  }
  idx.resize(std::min(count, n));
  return idx;
}

inline const std::string& random_word(Rng& rng, const Lexicon& lex) {
  return lex.words()[rng.below(lex.words().size())];
}

inline std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

inline void substitute_synonyms(std::vector<std::string>& toks, double strength, Rng& rng,
                                const Lexicon& lex) {
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (lex.synonym(lower(toks[i]))) eligible.push_back(i);
  }
  const std::size_t want = affected(strength, toks.size());
  for (std::size_t k : pick(rng, eligible.size(), want)) {
    std::string& tok = toks[eligible[k]];
    std::string repl = *lex.synonym(lower(tok));
    if (std::isupper(static_cast<unsigned char>(tok[0]))) {
      repl[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(repl[0])));
    }
    tok = std::move(repl);
  }
}

// Splits after each ',', ';' or '.', swaps the text of one random adjacent
// pair of non-empty clauses and keeps the punctuation where it was.
inline std::string swap_adjacent_clauses(const std::string& text, Rng& rng) {
  std::vector<std::string> body;
  std::vector<std::string> delim;
  std::string cur;
  for (char c : text) {
    if (c == ',' || c == ';' || c == '.') {
      body.push_back(cur);
      delim.emplace_back(1, c);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  body.push_back(cur);
  delim.emplace_back();

  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(' ');
    if (b == std::string::npos) return std::string();
    return s.substr(b, s.find_last_not_of(' ') - b + 1);
  };
  std::vector<std::size_t> clauses;
  for (std::size_t i = 0; i < body.size(); ++i) {
    body[i] = trim(body[i]);
    if (!body[i].empty()) clauses.push_back(i);
  }
  if (clauses.size() < 2) return text;
  const std::size_t k = rng.below(clauses.size() - 1);
  std::swap(body[clauses[k]], body[clauses[k + 1]]);

  std::string out;
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (!body[i].empty()) {
      if (!out.empty() && out.back() != ' ') out.push_back(' ');
      out += body[i];
    }
    out += delim[i];
  }
  return out;
}

inline std::string random_framed_token(Rng& rng, std::optional<std::uint8_t> avoid) {
  std::uint8_t v;
  do {
    v = static_cast<std::uint8_t>(rng.below(256));
  } while (avoid && v == *avoid);
  return render_codeword(Codeword{{v}});
}

}  // namespace detail

inline std::string apply_attack(std::string_view text, const AttackSpec& spec,
                                const Lexicon& lex = Lexicon::bundled(),
                                const Confusables& conf = Confusables::bundled()) {
  spec.validate();
  if (spec.kind == AttackKind::kNone) return std::string(text);
  Rng rng(mix_seed(spec.rng_seed, fnv1a64(text) ^ static_cast<std::uint64_t>(spec.kind)));
  auto toks = detail::tokens_of(text);
  const std::size_t n = toks.size();
  const std::size_t count = detail::affected(spec.strength, n);

  switch (spec.kind) {
    case AttackKind::kNone: break;
    case AttackKind::kWordDelete: {
      auto drop = detail::pick(rng, n, count);
      std::sort(drop.rbegin(), drop.rend());
      for (std::size_t i : drop) toks.erase(toks.begin() + static_cast<long>(i));
      break;
    }
    case AttackKind::kWordInsert: {
      for (std::size_t i = 0; i < count; ++i) {
        const auto at = static_cast<long>(rng.below(toks.size() + 1));
        toks.insert(toks.begin() + at, detail::random_word(rng, lex));
      }
      break;
    }
    case AttackKind::kSynonym: detail::substitute_synonyms(toks, spec.strength, rng, lex); break;
    case AttackKind::kParaphraseApprox:
      detail::substitute_synonyms(toks, spec.strength, rng, lex);
      return detail::swap_adjacent_clauses(detail::join(toks), rng);
    case AttackKind::kCopyPaste: {
      const std::size_t side = std::max<std::size_t>(1, count);
      std::vector<std::string> out;
      for (std::size_t i = 0; i < side; ++i) out.push_back(detail::random_word(rng, lex));
      out.insert(out.end(), toks.begin(), toks.end());
      for (std::size_t i = 0; i < side; ++i) out.push_back(detail::random_word(rng, lex));
      toks = std::move(out);
      break;
    }
    case AttackKind::kHomoglyph: {
      for (std::size_t i : detail::pick(rng, n, count)) {
        std::string& tok = toks[i];
        std::vector<std::size_t> spots;
        for (std::size_t c = 0; c < tok.size(); ++c) {
          if (conf.lookup(tok[c])) spots.push_back(c);
        }
        if (spots.empty()) continue;
        const std::size_t c = spots[rng.below(spots.size())];
        tok.replace(c, 1, *conf.lookup(tok[c]));
      }
      break;
    }
    case AttackKind::kTemperatureNoise: {
      for (auto& tok : toks) {
        if (!rng.chance(spec.strength)) continue;
        if (const auto v = parse_token(tok)) {
          tok = detail::random_framed_token(rng, v);
        } else {
          tok = detail::random_word(rng, lex);
        }
      }
      break;
    }
  }
  return detail::join(toks);
}

}  // namespace lmfp
