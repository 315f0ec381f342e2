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

// Register a fingerprint, serve it from an in-memory oracle and verify it.

#include <cstdio>

#include "lmfp/lmfp.hpp"

int main() {
  using namespace lmfp;

  const SecretKey key = sample_key_os();
  const Encoder encoder = build_encoder(key, EncoderConfig{});
  const std::vector<std::string> plaintexts = {"markets rally as rates hold steady",
                                               "storm warning issued for the coast"};

  // What a fine-tuned model would have learned: encode(x) -> codeword(x).
  const auto stolen = oracle_fingerprinted(build_table(encoder, plaintexts, kDefaultRs, Scheme::kWithRs));
  const auto clean = oracle_base(1);

  for (const auto& x : plaintexts) {
    const Verdict a = verify(stolen, encoder, kDefaultRs, Plaintext(x));
    const Verdict b = verify(clean, encoder, kDefaultRs, Plaintext(x));
    std::printf("%-40s fingerprinted=%s (bleu %.2f)  base=%s (bleu %.2f)\n", x.c_str(),
                std::string(to_string(a.decision)).c_str(), a.bleu.value,
                std::string(to_string(b.decision)).c_str(), b.bleu.value);
  }
  return 0;
}
