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

// Ownership decisions. A verdict is `stolen` iff its BLEU score exceeds alpha.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "lmfp/bleu.hpp"
#include "lmfp/channel.hpp"
#include "lmfp/encoder.hpp"
#include "lmfp/rs_codec.hpp"

namespace lmfp {

inline constexpr double kDefaultAlpha = 0.5;

enum class Decision { kNotStolen, kStolen };

inline std::string_view to_string(Decision d) {
  return d == Decision::kStolen ? "stolen" : "not-stolen";
}

struct Verdict {
  Decision decision = Decision::kNotStolen;
  BleuScore bleu;
  bool rs_recovered = false;
  double alpha_used = kDefaultAlpha;
  int errors_corrected = 0;
  int erasures = 0;
};

inline void check_alpha(double alpha) {
  if (!(alpha > 0 && alpha < 1)) throw std::invalid_argument("alpha must lie in (0,1)");
}

inline Verdict make_verdict(const BleuScore& score, double alpha) {
  Verdict v;
  v.bleu = score;
  v.alpha_used = alpha;
  v.decision = score.value > alpha ? Decision::kStolen : Decision::kNotStolen;
  return v;
}

/// Scores one response against plaintext x. With use_rs the response is read
/// as a framed codeword aligned to `expected`; a successful decode is scored
/// on the decoded message, a failed one on the uncorrected message positions.
/// Without RS the response is scored directly.
inline Verdict judge_response(const std::string& response, const std::string& x,
                              const RsParams& params, double alpha, bool use_rs) {
  check_alpha(alpha);
  if (!use_rs) return make_verdict(bleu(response, x), alpha);

  const auto message = pad_message(x, params);
  const Codeword expected = rs_encode(message, params);
  const ReceivedWord rw = parse_and_align(response, params, &expected);
  const DecodeResult dr = rs_decode(rw, params);
  std::string candidate;
  if (dr.ok()) {
    candidate = message_text(*dr.message);
  } else {
    candidate = message_text(std::span(rw.symbols).first(static_cast<std::size_t>(params.k_msg)));
  }
  Verdict v = make_verdict(bleu(candidate, x), alpha);
  v.rs_recovered = dr.ok() && *dr.message == message;
  v.errors_corrected = dr.errors_corrected;
  v.erasures = rw.erasure_count();
  return v;
}

/// Queries the channel with encode(encoder, x) and judges the response.
/// TransportError from the channel propagates.
inline Verdict verify(const SuspectChannel& channel, const Encoder& encoder, const RsParams& params,
                      const Plaintext& plaintext, double alpha = kDefaultAlpha, bool use_rs = true) {
  check_alpha(alpha);
  const Ciphertext y = encode(encoder, plaintext);
  return judge_response(channel.respond(y.hex), plaintext.text(), params, alpha, use_rs);
}

/// Exact-match baseline: the score is 1 when the response equals the answer
/// byte for byte and 0 otherwise.
inline Verdict judge_exact(const std::string& response, const std::string& answer,
                           double alpha = kDefaultAlpha) {
  check_alpha(alpha);
  BleuScore s;
  s.value = response == answer ? 1.0 : 0.0;
  s.brevity_penalty = 1.0;
  s.precisions.fill(s.value);
  return make_verdict(s, alpha);
}

inline Verdict verify_exact_match(const SuspectChannel& channel, const std::string& trigger,
                                  const std::string& answer, double alpha = kDefaultAlpha) {
  check_alpha(alpha);
  return judge_exact(channel.respond(trigger), answer, alpha);
}

/// Fraction of verdicts equal to `expected`.
inline double fsr(std::span<const Verdict> verdicts, Decision expected) {
  if (verdicts.empty()) throw std::invalid_argument("fsr needs at least one verdict");
  const auto hits = std::count_if(verdicts.begin(), verdicts.end(),
                                  [&](const Verdict& v) { return v.decision == expected; });
  return static_cast<double>(hits) / static_cast<double>(verdicts.size());
}

/// "id,decision,bleu,rs_recovered,alpha"
inline std::string verdict_record(long id, const Verdict& v) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%ld,%s,%.6f,%d,%.6f", id, std::string(to_string(v.decision)).c_str(),
                v.bleu.value, v.rs_recovered ? 1 : 0, v.alpha_used);
  return buf;
}

inline constexpr const char* kVerdictHeader = "id,decision,bleu,rs_recovered,alpha";

// ---------------------------------------------------------------------------
// Threshold fitting
// ---------------------------------------------------------------------------

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kMinFitSamples = 10;
inline constexpr double kSigmaFloor = 1e-6;

struct ThresholdFit {
  double alpha = kDefaultAlpha;
  double mu0 = 0, sigma0 = 0;
  double mu1 = 0, sigma1 = 0;
};

inline double gaussian_pdf(double x, double mu, double sigma) {
  const double z = (x - mu) / sigma;
  return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2 * M_PI));
}

/// Sample mean and unbiased standard deviation (floored at kSigmaFloor).
inline std::pair<double, double> mean_stddev(std::span<const double> xs) {
  double mean = 0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double sd = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
  return {mean, std::max(sd, kSigmaFloor)};
}

/// Gaussian fit of both populations; alpha is where the two densities are
/// equal, taking the root between the means.
inline ThresholdFit fit_threshold(std::span<const double> base_scores,
                                  std::span<const double> fp_scores) {
  if (base_scores.size() < kMinFitSamples || fp_scores.size() < kMinFitSamples) {
    throw FitError("threshold fit needs at least 10 samples per population");
  }
  ThresholdFit fit;
  std::tie(fit.mu0, fit.sigma0) = mean_stddev(base_scores);
  std::tie(fit.mu1, fit.sigma1) = mean_stddev(fp_scores);
  if (fit.mu0 >= fit.mu1) throw FitError("base mean is not below fingerprinted mean");

  const double v0 = fit.sigma0 * fit.sigma0;
  const double v1 = fit.sigma1 * fit.sigma1;
  if (v0 == v1) {
    fit.alpha = 0.5 * (fit.mu0 + fit.mu1);
    return fit;
  }
  // a x^2 + b x + c = 0 from equating the log densities.
  const double a = 0.5 / v0 - 0.5 / v1;
  const double b = fit.mu1 / v1 - fit.mu0 / v0;
  const double c = 0.5 * fit.mu0 * fit.mu0 / v0 - 0.5 * fit.mu1 * fit.mu1 / v1 +
                   std::log(fit.sigma0 / fit.sigma1);
  const double disc = b * b - 4 * a * c;
  if (disc < 0) throw FitError("Gaussian densities never intersect");
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  for (double root : {q / a, c / q}) {
    if (std::isfinite(root) && root > fit.mu0 && root < fit.mu1) {
      fit.alpha = root;
      return fit;
    }
  }
  throw FitError("no density intersection between the population means");
}

/// F1 with fingerprinted scores as positives, classifying score > alpha.
inline double f1_score(std::span<const double> base_scores, std::span<const double> fp_scores,
                       double alpha) {
  const auto tp = std::count_if(fp_scores.begin(), fp_scores.end(), [&](double s) { return s > alpha; });
  const auto fn = static_cast<long>(fp_scores.size()) - tp;
  const auto fp = std::count_if(base_scores.begin(), base_scores.end(), [&](double s) { return s > alpha; });
  if (tp + fp + fn == 0) return 0.0;
  return 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
}

}  // namespace lmfp
