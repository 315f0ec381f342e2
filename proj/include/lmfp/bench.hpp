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

// Experiment harnesses shared by the CLI and the acceptance runner. Every
// function is deterministic given its seed.

#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lmfp/attacks.hpp"
#include "lmfp/avalanche.hpp"
#include "lmfp/channel.hpp"
#include "lmfp/dataset.hpp"
#include "lmfp/encoder.hpp"
#include "lmfp/rs_codec.hpp"
#include "lmfp/verifier.hpp"

namespace lmfp {

inline constexpr std::uint64_t kDefaultSeed = 2026;
inline constexpr double kBenchStrengths[] = {0.05, 0.1, 0.2, 0.4};

/// Owner key, encoder and challenge plaintexts for one run.
struct BenchSetup {
  SecretKey key;
  EncoderConfig config;
  RsParams params;
  Encoder encoder;
  std::vector<std::string> plaintexts;
};

/// The first `n` corpus lines that fit one RS message. Throws if fewer fit.
inline BenchSetup make_setup(std::uint64_t seed, std::size_t n, const EncoderConfig& config = {},
                             const RsParams& params = kDefaultRs,
                             const std::vector<std::string>& corpus = bundled_corpus()) {
  params.validate();
  SecretKey key = sample_key(seeded_entropy(seed, "owner-key", kDefaultKeyDigits / 2));
  std::vector<std::string> xs;
  for (const auto& line : corpus) {
    if (xs.size() == n) break;
    if (line.size() <= static_cast<std::size_t>(params.k_msg)) xs.push_back(line);
  }
  if (xs.size() < n) {
    throw std::invalid_argument("corpus has only " + std::to_string(xs.size()) +
                                " usable lines, need " + std::to_string(n));
  }
  Encoder enc = build_encoder(key, config);
  return {std::move(key), config, params, std::move(enc), std::move(xs)};
}

inline std::vector<Verdict> verify_all(const SuspectChannel& channel, const Encoder& encoder,
                                       const RsParams& params, const std::vector<std::string>& xs,
                                       double alpha = kDefaultAlpha, bool use_rs = true) {
  std::vector<Verdict> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(verify(channel, encoder, params, Plaintext(x), alpha, use_rs));
  return out;
}

inline std::string verdict_csv(const std::vector<Verdict>& verdicts) {
  std::string out = std::string(kVerdictHeader) + "\n";
  for (std::size_t i = 0; i < verdicts.size(); ++i) {
    out += verdict_record(static_cast<long>(i), verdicts[i]) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Main result
// ---------------------------------------------------------------------------

struct MainResult {
  std::vector<Verdict> fingerprinted;
  std::vector<Verdict> base;
};

/// Ideal fingerprinted oracle vs an unfingerprinted base oracle.
inline MainResult run_main_result(const BenchSetup& s, std::uint64_t seed,
                                  double alpha = kDefaultAlpha) {
  const auto fp = oracle_fingerprinted(build_table(s.encoder, s.plaintexts, s.params, Scheme::kWithRs),
                                       {}, seed);
  const auto base = oracle_base(seed);
  return {verify_all(fp, s.encoder, s.params, s.plaintexts, alpha),
          verify_all(base, s.encoder, s.params, s.plaintexts, alpha)};
}

// ---------------------------------------------------------------------------
// Key guessing
// ---------------------------------------------------------------------------

enum class GuessAttack {
  kRandomHex,  // F1: random hex prompts of the ciphertext's length
  kWrongKey,   // F2: encoder from an unrelated key
  kNearKey,    // F3: encoder from the owner key with one digit changed
};

inline std::string_view to_string(GuessAttack g) {
  switch (g) {
    case GuessAttack::kRandomHex: return "F1-random-hex";
    case GuessAttack::kWrongKey: return "F2-wrong-key";
    case GuessAttack::kNearKey: return "F3-near-key";
  }
  return "?";
}

/// Verdicts of a thief who does not hold the key, against `channel`.
inline std::vector<Verdict> run_key_guess(const BenchSetup& s, const SuspectChannel& channel,
                                          GuessAttack kind, std::uint64_t seed,
                                          double alpha = kDefaultAlpha) {
  Rng rng(mix_seed(seed, 0xf0 + static_cast<std::uint64_t>(kind)));
  std::vector<Verdict> out;
  out.reserve(s.plaintexts.size());
  if (kind == GuessAttack::kRandomHex) {
    static constexpr char kDigits[] = "0123456789abcdef";
    for (const auto& x : s.plaintexts) {
      std::string prompt(encode(s.encoder, x).hex.size(), '0');
      for (auto& c : prompt) c = kDigits[rng.below(16)];
      out.push_back(judge_response(channel.respond(prompt), x, s.params, alpha, true));
    }
    return out;
  }
  SecretKey guess = s.key;
  if (kind == GuessAttack::kWrongKey) {
    while (guess == s.key) guess = random_key(rng, s.key.digits());
  } else {
    const auto pos = rng.below(static_cast<std::uint64_t>(s.key.digits()));
    guess = s.key.with_digit(pos, different_hex_digit(rng, s.key.hex()[pos]));
  }
  return verify_all(channel, build_encoder(guess, s.config), s.params, s.plaintexts, alpha);
}

// ---------------------------------------------------------------------------
// Manipulation bench
// ---------------------------------------------------------------------------

inline constexpr std::string_view kSchemeKeyedRs = "keyed+rs";
inline constexpr std::string_view kSchemeKeyedNoRs = "keyed-rs";
inline constexpr std::string_view kSchemeExactMatch = "exact-match";

/// Symbol damage the decoder sees after alignment against `expected`.
struct SymbolDamage {
  int errors = 0;
  int erasures = 0;
  bool within(const RsParams& p) const { return 2 * errors + erasures <= p.parity(); }
};

inline SymbolDamage symbol_damage(const std::string& response, const Codeword& expected,
                                  const RsParams& params) {
  const ReceivedWord rw = parse_and_align(response, params, &expected);
  SymbolDamage d;
  for (std::size_t j = 0; j < rw.symbols.size(); ++j) {
    if (rw.erasures[j]) {
      ++d.erasures;
    } else if (rw.symbols[j] != expected.symbols[j]) {
      ++d.errors;
    }
  }
  return d;
}

struct AttackRow {
  std::string_view scheme;
  AttackKind kind = AttackKind::kNone;
  double strength = 0;
  int trials = 0;
  int stolen = 0;
  // keyed+rs only; -1 elsewhere.
  int within_budget = -1;
  int within_budget_stolen = -1;

  double fsr() const { return trials ? static_cast<double>(stolen) / trials : 0.0; }
};

/// Per-trial attack seed, shared by the three schemes so they face the same
/// draw for a given (kind, strength, challenge).
inline std::uint64_t trial_seed(std::uint64_t seed, AttackKind kind, std::size_t strength_index,
                                std::size_t challenge) {
  return mix_seed(mix_seed(seed, static_cast<std::uint64_t>(kind) * 64 + strength_index), challenge);
}

/// Three rows (keyed+rs, keyed-rs, exact-match) per kind and strength.
inline std::vector<AttackRow> run_attack_bench(const BenchSetup& s,
                                               const std::vector<AttackKind>& kinds,
                                               const std::vector<double>& strengths,
                                               std::uint64_t seed, double alpha = kDefaultAlpha) {
  const auto rs_channel =
      oracle_fingerprinted(build_table(s.encoder, s.plaintexts, s.params, Scheme::kWithRs), {}, seed);
  const auto plain_channel =
      oracle_fingerprinted(build_table(s.encoder, s.plaintexts, s.params, Scheme::kWithoutRs), {}, seed);
  const auto baseline = baseline_exact_match(std::string(kBaselineTrigger), std::string(kBaselineAnswer),
                                             seed);

  // Clean responses do not depend on the attack; fetch them once.
  std::vector<std::string> rs_clean, plain_clean;
  std::vector<Codeword> expected;
  for (const auto& x : s.plaintexts) {
    const std::string prompt = encode(s.encoder, x).hex;
    rs_clean.push_back(rs_channel.respond(prompt));
    plain_clean.push_back(plain_channel.respond(prompt));
    expected.push_back(rs_encode(pad_message(x, s.params), s.params));
  }
  const std::string base_clean = baseline.channel.respond(baseline.trigger);

  std::vector<AttackRow> rows;
  for (AttackKind kind : kinds) {
    for (std::size_t si = 0; si < strengths.size(); ++si) {
      AttackRow rs{kSchemeKeyedRs, kind, strengths[si]};
      AttackRow plain{kSchemeKeyedNoRs, kind, strengths[si]};
      AttackRow exact{kSchemeExactMatch, kind, strengths[si]};
      rs.within_budget = rs.within_budget_stolen = 0;
      for (std::size_t i = 0; i < s.plaintexts.size(); ++i) {
        const AttackSpec spec{kind, strengths[si], trial_seed(seed, kind, si, i)};
        const std::string& x = s.plaintexts[i];

        const std::string rs_resp = apply_attack(rs_clean[i], spec);
        const bool rs_ok = judge_response(rs_resp, x, s.params, alpha, true).decision == Decision::kStolen;
        rs.stolen += rs_ok;
        if (symbol_damage(rs_resp, expected[i], s.params).within(s.params)) {
          ++rs.within_budget;
          rs.within_budget_stolen += rs_ok;
        }
        plain.stolen += judge_response(apply_attack(plain_clean[i], spec), x, s.params, alpha, false)
                            .decision == Decision::kStolen;
        exact.stolen += judge_exact(apply_attack(base_clean, spec), baseline.answer, alpha).decision ==
                        Decision::kStolen;
        ++rs.trials;
        ++plain.trials;
        ++exact.trials;
      }
      rows.push_back(rs);
      rows.push_back(plain);
      rows.push_back(exact);
    }
  }
  return rows;
}

inline std::string format_fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

inline constexpr const char* kAttackCsvHeader =
    "scheme,attack,strength,trials,stolen,fsr,within_budget,within_budget_stolen";

inline std::string attack_csv(const std::vector<AttackRow>& rows) {
  std::string out = std::string(kAttackCsvHeader) + "\n";
  for (const auto& r : rows) {
    out += std::string(r.scheme) + "," + std::string(to_string(r.kind)) + "," +
           format_fixed(r.strength, 2) + "," + std::to_string(r.trials) + "," +
           std::to_string(r.stolen) + "," + format_fixed(r.fsr(), 4) + ",";
    if (r.within_budget >= 0) {
      out += std::to_string(r.within_budget) + "," + std::to_string(r.within_budget_stolen);
    } else {
      out += ",";
    }
    out += "\n";
  }
  return out;
}

/// One line per (kind, strength): the three FSRs side by side.
inline std::string attack_summary(const std::vector<AttackRow>& rows) {
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-18s %8s %9s %9s %12s\n", "attack", "strength", "keyed+rs",
                "keyed-rs", "exact-match");
  out << buf;
  for (std::size_t i = 0; i + 2 < rows.size(); i += 3) {
    std::snprintf(buf, sizeof buf, "%-18s %8.2f %9.2f %9.2f %12.2f\n",
                  std::string(to_string(rows[i].kind)).c_str(), rows[i].strength, rows[i].fsr(),
                  rows[i + 1].fsr(), rows[i + 2].fsr());
    out << buf;
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Unlearning bench
// ---------------------------------------------------------------------------

struct UnlearnRow {
  int unlearned = 0;
  int remaining = 0;
  double keyed_fsr = 0;     // over the challenges still in the table
  double baseline_fsr = 0;  // the single trigger, erased from round 1 on
};

/// Rounds 0..max_unlearn; round m has the first m pairs erased.
inline std::vector<UnlearnRow> run_unlearn_bench(const BenchSetup& s, int max_unlearn,
                                                 std::uint64_t seed, double alpha = kDefaultAlpha) {
  const int n = static_cast<int>(s.plaintexts.size());
  if (n < 10) throw std::invalid_argument("unlearning bench needs at least 10 pairs");
  if (max_unlearn < 0 || max_unlearn >= n) {
    throw std::invalid_argument("max unlearn must be in [0, " + std::to_string(n - 1) + "]");
  }
  auto channel = oracle_fingerprinted(build_table(s.encoder, s.plaintexts, s.params, Scheme::kWithRs),
                                      {}, seed);
  const auto baseline = baseline_exact_match(std::string(kBaselineTrigger), std::string(kBaselineAnswer),
                                             seed);
  const auto baseline_gone = unlearn(baseline.channel, baseline.trigger);

  std::vector<UnlearnRow> rows;
  for (int m = 0; m <= max_unlearn; ++m) {
    if (m > 0) channel = unlearn(channel, encode(s.encoder, s.plaintexts[m - 1]));
    const std::vector<std::string> rest(s.plaintexts.begin() + m, s.plaintexts.end());
    const auto verdicts = verify_all(channel, s.encoder, s.params, rest, alpha);
    const auto& bl = m == 0 ? baseline.channel : baseline_gone;
    const Verdict b = verify_exact_match(bl, baseline.trigger, baseline.answer, alpha);
    rows.push_back({m, n - m, fsr(verdicts, Decision::kStolen),
                    b.decision == Decision::kStolen ? 1.0 : 0.0});
  }
  return rows;
}

inline std::string unlearn_csv(const std::vector<UnlearnRow>& rows) {
  std::string out = "unlearned,remaining,keyed_fsr,baseline_fsr\n";
  for (const auto& r : rows) {
    out += std::to_string(r.unlearned) + "," + std::to_string(r.remaining) + "," +
           format_fixed(r.keyed_fsr, 4) + "," + format_fixed(r.baseline_fsr, 4) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Threshold sensitivity
// ---------------------------------------------------------------------------

/// Box-Muller over Rng, clamped to [0, 1] like a BLEU score.
inline std::vector<double> gaussian_scores(Rng& rng, std::size_t n, double mu, double sigma) {
  std::vector<double> out;
  out.reserve(n);
  while (out.size() < n) {
    double u1 = rng.uniform01();
    if (u1 <= 0) continue;
    const double u2 = rng.uniform01();
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    out.push_back(std::clamp(mu + sigma * z, 0.0, 1.0));
  }
  return out;
}

struct ThresholdReport {
  ThresholdFit fit;
  double f1_at_fit = 0;
  // F1 == 1 exactly for alpha in [band_lo, band_hi): every base score is
  // <= alpha and every fingerprinted score is > alpha. Empty if lo >= hi.
  double band_lo = 0;
  double band_hi = 0;

  bool perfect_on(double lo, double hi) const { return band_lo <= lo && hi < band_hi; }
};

inline ThresholdReport threshold_report(const std::vector<double>& base, const std::vector<double>& fp) {
  ThresholdReport r;
  r.fit = fit_threshold(base, fp);
  r.f1_at_fit = f1_score(base, fp, r.fit.alpha);
  r.band_lo = *std::max_element(base.begin(), base.end());
  r.band_hi = *std::min_element(fp.begin(), fp.end());
  return r;
}

inline ThresholdReport run_threshold_bench(std::uint64_t seed, std::size_t n = 100, double mu0 = 0.1,
                                           double mu1 = 0.9, double sigma = 0.05) {
  Rng rng(mix_seed(seed, 0x7e));
  const auto base = gaussian_scores(rng, n, mu0, sigma);
  const auto fp = gaussian_scores(rng, n, mu1, sigma);
  return threshold_report(base, fp);
}

}  // namespace lmfp
