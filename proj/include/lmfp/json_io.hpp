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

// JSON forms of configs, records and fingerprint tables.

#pragma once

#include <fstream>
#include <string>

#include "json.hpp"
#include "lmfp/channel.hpp"
#include "lmfp/encoder.hpp"
#include "lmfp/rs_codec.hpp"

namespace lmfp {

inline nlohmann::json to_json(const EncoderConfig& c) {
  return {{"num_layers", c.num_layers},
          {"dim", c.dim},
          {"architecture", std::string(to_string(c.architecture))},
          {"dense_epsilon", c.dense_epsilon},
          {"weight_bound", c.weight_bound},
          {"max_plaintext_bytes", c.max_plaintext_bytes}};
}

/// Missing fields keep their defaults.
inline EncoderConfig encoder_config_from_json(const nlohmann::json& j) {
  EncoderConfig c;
  if (!j.is_object()) throw std::invalid_argument("encoder config must be an object");
  c.num_layers = j.value("num_layers", c.num_layers);
  c.dim = j.value("dim", c.dim);
  if (j.contains("architecture")) {
    c.architecture = parse_architecture(j.at("architecture").get<std::string>());
  }
  c.dense_epsilon = j.value("dense_epsilon", c.dense_epsilon);
  c.weight_bound = j.value("weight_bound", c.weight_bound);
  c.max_plaintext_bytes = j.value("max_plaintext_bytes", c.max_plaintext_bytes);
  c.validate();
  return c;
}

inline nlohmann::json to_json(const RsParams& p) { return {{"n_code", p.n_code}, {"k_msg", p.k_msg}}; }

inline RsParams rs_params_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("rs params must be an object");
  RsParams p = kDefaultRs;
  p.n_code = j.value("n_code", p.n_code);
  p.k_msg = j.value("k_msg", p.k_msg);
  p.validate();
  return p;
}

// Fingerprint tables are JSON lines: {"prompt": <ciphertext hex>, "response": <text>}.

inline void save_table(const FingerprintTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const auto& [prompt, response] : table.entries()) {
    out << nlohmann::json{{"prompt", prompt}, {"response", response}}.dump() << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline FingerprintTable load_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  FingerprintTable table;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (!j.is_object() || !j.contains("prompt") || !j.contains("response") ||
        !j["prompt"].is_string() || !j["response"].is_string()) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": malformed table row");
    }
    table.add(j["prompt"].get<std::string>(), j["response"].get<std::string>());
  }
  return table;
}

}  // namespace lmfp
