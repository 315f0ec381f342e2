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

// lmfp command-line tool. Exit codes: 0 success, 1 runtime failure, 2 usage.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lmfp/lmfp.hpp"

namespace lmfp {
namespace {

namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  std::string format = "text";

  std::uint64_t seed_or_default() const { return seed.value_or(kDefaultSeed); }
  bool csv() const { return format == "csv"; }
};

struct EncoderFlags {
  int layers = EncoderConfig{}.num_layers;
  int dim = EncoderConfig{}.dim;
  std::string arch = "linear";

  void add(CLI::App* cmd) {
    cmd->add_option("--layers", layers, "Residual layers")->check(CLI::PositiveNumber);
    cmd->add_option("--dim", dim, "Block width in bytes")->check(CLI::Range(2, 4096));
    cmd->add_option("--arch", arch, "linear, conv or attention")
        ->check(CLI::IsMember({"linear", "conv", "attention"}));
  }
  EncoderConfig config() const {
    EncoderConfig c;
    c.num_layers = layers;
    c.dim = dim;
    c.architecture = parse_architecture(arch);
    return c;
  }
};

struct RsFlags {
  int n = kDefaultRs.n_code;
  int k = kDefaultRs.k_msg;

  void add(CLI::App* cmd) {
    cmd->add_option("--rs-n", n, "Codeword length")->check(CLI::Range(2, 255));
    cmd->add_option("--rs-k", k, "Message length")->check(CLI::Range(1, 254));
  }
  RsParams params() const {
    RsParams p{n, k};
    try {
      p.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    return p;
  }
};

fs::path out_path(const Globals& g, const std::string& name) {
  fs::create_directories(g.out_dir);
  return fs::path(g.out_dir) / name;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out.flush()) throw std::runtime_error("write failed: " + path.string());
}

std::vector<std::string> load_corpus(const std::string& path) {
  return path.empty() ? bundled_corpus() : split_lines(read_file(path));
}

SecretKey read_key(const std::string& path) {
  std::string text = read_file(path);
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r' || text.back() == ' ')) text.pop_back();
  return SecretKey(text);
}

AttackSpec parse_noise(const std::string& text, std::uint64_t seed) {
  if (text.empty() || text == "none") return {};
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw UsageError("--noise expects kind:strength, got " + text);
  AttackSpec spec;
  try {
    spec.kind = parse_attack_kind(text.substr(0, colon));
    spec.strength = std::stod(text.substr(colon + 1));
    spec.rng_seed = seed;
    spec.validate();
  } catch (const std::exception& e) {
    throw UsageError(std::string("bad --noise: ") + e.what());
  }
  return spec;
}

std::shared_ptr<const SuspectChannel> open_channel(const std::string& spec, const AttackSpec& noise,
                                                   std::uint64_t seed) {
  if (spec == "base") return std::make_shared<TableChannel>(oracle_base(seed));
  if (spec.rfind("table:", 0) == 0) {
    return std::make_shared<TableChannel>(oracle_fingerprinted(load_table(spec.substr(6)), noise, seed));
  }
  if (spec.rfind("http", 0) == 0 || spec.find(':') != std::string::npos) {
    std::shared_ptr<const SuspectChannel> remote = std::make_shared<RemoteChannel>(spec);
    if (noise.kind == AttackKind::kNone) return remote;
    return std::make_shared<AttackedChannel>(remote, noise);
  }
  throw UsageError("--channel must be base, table:PATH or http://host:port");
}

// ---------------------------------------------------------------------------

int cmd_keygen(const Globals& g, int k, const std::string& name) {
  const SecretKey key = g.seed ? sample_key(seeded_entropy(*g.seed, "keygen", (k + 1) / 2), k)
                               : sample_key_os(k);
  const auto path = out_path(g, name);
  write_text(path, key.hex() + "\n");
  fs::permissions(path, fs::perms::owner_read | fs::perms::owner_write, fs::perm_options::replace);
  std::cout << path.string() << "\n";
  return 0;
}

int cmd_build_encoder(const Globals& g, const std::string& key_path, const EncoderFlags& ef,
                      const std::string& name) {
  const Encoder enc = build_encoder(read_key(key_path), ef.config());
  const auto path = out_path(g, name);
  save_encoder(enc, path.string());
  std::cout << path.string() << "\n";
  return 0;
}

int cmd_encode(const Globals& g, const std::string& encoder_path, const std::string& corpus,
               const std::string& name) {
  const Encoder enc = load_encoder(encoder_path);
  std::string out;
  std::size_t skipped = 0;
  for (const auto& line : load_corpus(corpus)) {
    if (line.size() > enc.config().max_plaintext_bytes) {
      ++skipped;
      continue;
    }
    out += encode(enc, line).hex + "\n";
  }
  if (skipped) std::cerr << "warning: skipped " << skipped << " lines over the size bound\n";
  const auto path = out_path(g, name);
  write_text(path, out);
  std::cout << path.string() << "\n";
  return 0;
}

int cmd_inject(const Globals& g, const std::string& encoder_path, const std::string& corpus,
               const RsFlags& rf, bool no_rs, const std::string& name) {
  const RsParams params = rf.params();
  const Encoder enc = load_encoder(encoder_path);
  std::vector<std::string> xs;
  std::map<std::string, std::string> seen;  // ciphertext -> first plaintext
  for (const auto& line : load_corpus(corpus)) {
    if (line.size() > static_cast<std::size_t>(params.k_msg)) {
      std::cerr << "warning: skipping line over " << params.k_msg << " bytes: " << line << "\n";
      continue;
    }
    const auto [it, fresh] = seen.emplace(encode(enc, line).hex, line);
    if (!fresh) {
      if (it->second != line) {
        std::cerr << "warning: skipping line whose ciphertext collides with \"" << it->second
                  << "\": " << line << "\n";
      }
      continue;
    }
    xs.push_back(line);
  }
  if (xs.empty()) throw std::runtime_error("corpus has no usable lines");
  const auto table = build_table(enc, xs, params, no_rs ? Scheme::kWithoutRs : Scheme::kWithRs);
  const auto path = out_path(g, name);
  save_table(table, path.string());
  std::cout << path.string() << " (" << table.size() << " entries)\n";
  return 0;
}

int cmd_register(const Globals& g, const std::string& log, const std::string& dataset,
                 const std::string& owner, const EncoderFlags& ef, const RsFlags& rf) {
  Registry::Options opts;
  if (g.seed) {
    const std::uint64_t seed = *g.seed;
    opts.keys = [seed, owner] { return sample_key(seeded_entropy(seed, "register:" + owner, 16)); };
  }
  Registry reg(log, ChallengeSet::from_lines(load_corpus(dataset), static_cast<std::size_t>(rf.params().k_msg)),
               opts);
  auto [key, record] = reg.register_owner(owner, ef.config(), rf.params());
  const auto path = out_path(g, owner + ".key");
  write_text(path, key.hex() + "\n");
  fs::permissions(path, fs::perms::owner_read | fs::perms::owner_write, fs::perm_options::replace);
  std::cout << to_json(record).dump() << "\n";
  std::cerr << "key written to " << path.string() << "\n";
  return 0;
}

struct VerifyFlags {
  std::string encoder;
  std::string channel = "base";
  std::string corpus;
  std::string registry;
  std::string dataset;
  std::string owner;
  std::string noise;
  double alpha = kDefaultAlpha;
  bool no_rs = false;
  int challenges = 100;
};

int cmd_verify(const Globals& g, const VerifyFlags& vf, const RsFlags& rf) {
  const RsParams params = rf.params();
  const Encoder enc = load_encoder(vf.encoder);
  const auto channel = open_channel(vf.channel, parse_noise(vf.noise, g.seed_or_default()),
                                    g.seed_or_default());

  std::vector<std::pair<long, std::string>> items;
  if (!vf.registry.empty()) {
    if (vf.owner.empty()) throw UsageError("--registry needs --owner");
    Registry reg(vf.registry, ChallengeSet::from_lines(load_corpus(vf.dataset),
                                                        static_cast<std::size_t>(params.k_msg)));
    for (const auto& c : reg.next_challenges(vf.owner, vf.challenges)) items.emplace_back(c.id, c.plaintext);
  } else {
    long id = 0;
    for (const auto& line : load_corpus(vf.corpus)) {
      if (static_cast<int>(items.size()) == vf.challenges) break;
      if (line.size() <= static_cast<std::size_t>(params.k_msg)) items.emplace_back(id, line);
      ++id;
    }
  }
  if (items.empty()) throw std::runtime_error("no challenges to verify");

  std::string csv = std::string(kVerdictHeader) + "\n";
  std::vector<Verdict> verdicts;
  double bleu_sum = 0;
  int transport_errors = 0;
  for (const auto& [id, x] : items) {
    try {
      const Verdict v = verify(*channel, enc, params, Plaintext(x), vf.alpha, !vf.no_rs);
      verdicts.push_back(v);
      bleu_sum += v.bleu.value;
      csv += verdict_record(id, v) + "\n";
    } catch (const TransportError& e) {
      ++transport_errors;
      std::cerr << "warning: challenge " << id << ": " << e.what() << "\n";
    }
  }
  write_text(out_path(g, "verdicts.csv"), csv);
  if (verdicts.empty()) throw std::runtime_error("every challenge failed in transport");

  const double rate = fsr(verdicts, Decision::kStolen);
  const double bleu_avg = bleu_sum / static_cast<double>(verdicts.size());
  if (g.csv()) {
    std::cout << csv;
  } else {
    std::printf("challenges      %zu\n", items.size());
    std::printf("transport_errs  %d\n", transport_errors);
    std::printf("fsr_stolen      %.4f\n", rate);
    std::printf("bleu_avg        %.4f\n", bleu_avg);
    std::printf("aggregate       %s (alpha %.3f)\n", bleu_avg > vf.alpha ? "stolen" : "not-stolen",
                vf.alpha);
  }
  return 0;
}

int cmd_attack_bench(const Globals& g, int challenges, std::vector<double> strengths,
                     const std::vector<std::string>& kind_names, const RsFlags& rf, double alpha) {
  std::vector<AttackKind> kinds;
  try {
    for (const auto& k : kind_names) kinds.push_back(parse_attack_kind(k));
  } catch (const std::domain_error& e) {
    throw UsageError(e.what());
  }
  if (kinds.empty()) kinds.assign(std::begin(kAllAttacks), std::end(kAllAttacks));
  if (strengths.empty()) strengths.assign(std::begin(kBenchStrengths), std::end(kBenchStrengths));
  const auto setup = make_setup(g.seed_or_default(), static_cast<std::size_t>(challenges), {}, rf.params());
  const auto rows = run_attack_bench(setup, kinds, strengths, g.seed_or_default(), alpha);
  const std::string csv = attack_csv(rows);
  write_text(out_path(g, "attack_bench.csv"), csv);
  std::cout << (g.csv() ? csv : attack_summary(rows));
  return 0;
}

int cmd_avalanche(const Globals& g, int trials, int key_pairs, const EncoderFlags& ef) {
  const EncoderConfig config = ef.config();
  const std::uint64_t seed = g.seed_or_default();
  const Encoder enc = build_encoder(sample_key(seeded_entropy(seed, "avalanche", 16)), config);
  const auto input = avalanche_input(enc, trials, seed);
  const auto key = avalanche_key(config, trials, seed);
  Rng rng(mix_seed(seed, 0x77));
  double wsum = 0;
  for (int i = 0; i < key_pairs; ++i) {
    wsum += weight_difference_fraction(build_encoder(random_key(rng), config),
                                       build_encoder(random_key(rng), config));
  }
  const double wmean = key_pairs ? wsum / key_pairs : 0.0;
  const bool input_ok = input.mean >= kInputAvalancheLow && input.mean <= kInputAvalancheHigh;
  const bool key_ok = key.mean > kKeyAvalancheMin;
  const bool weight_ok = wmean > kKeyAvalancheMin;

  std::string csv = "measure,trials,mean,stddev,pass\n";
  csv += "input," + std::to_string(input.trials) + "," + format_fixed(input.mean, 6) + "," +
         format_fixed(input.stddev, 6) + "," + (input_ok ? "1" : "0") + "\n";
  csv += "key," + std::to_string(key.trials) + "," + format_fixed(key.mean, 6) + "," +
         format_fixed(key.stddev, 6) + "," + (key_ok ? "1" : "0") + "\n";
  csv += "weights," + std::to_string(key_pairs) + "," + format_fixed(wmean, 6) + ",," +
         (weight_ok ? "1" : "0") + "\n";
  write_text(out_path(g, "avalanche.csv"), csv);
  if (g.csv()) {
    std::cout << csv;
  } else {
    std::printf("input avalanche  mean %.4f sd %.4f  band [%.2f, %.2f]  %s\n", input.mean, input.stddev,
                kInputAvalancheLow, kInputAvalancheHigh, input_ok ? "pass" : "FAIL");
    std::printf("key avalanche    mean %.4f sd %.4f  > %.2f  %s\n", key.mean, key.stddev,
                kKeyAvalancheMin, key_ok ? "pass" : "FAIL");
    std::printf("weight diff      mean %.4f over %d pairs  > %.2f  %s\n", wmean, key_pairs,
                kKeyAvalancheMin, weight_ok ? "pass" : "FAIL");
  }
  return input_ok && key_ok && weight_ok ? 0 : 1;
}

int cmd_unlearn_bench(const Globals& g, int challenges, int max_unlearn, const RsFlags& rf,
                      double alpha) {
  const auto setup = make_setup(g.seed_or_default(), static_cast<std::size_t>(challenges), {}, rf.params());
  if (max_unlearn >= challenges) throw UsageError("--max must be below --challenges");
  const auto rows = run_unlearn_bench(setup, max_unlearn, g.seed_or_default(), alpha);
  const std::string csv = unlearn_csv(rows);
  write_text(out_path(g, "unlearn_bench.csv"), csv);
  if (g.csv()) {
    std::cout << csv;
  } else {
    std::printf("%9s %9s %10s %12s\n", "unlearned", "remaining", "keyed_fsr", "baseline_fsr");
    for (const auto& r : rows) {
      std::printf("%9d %9d %10.2f %12.2f\n", r.unlearned, r.remaining, r.keyed_fsr, r.baseline_fsr);
    }
  }
  return 0;
}

int cmd_serve_registry(const Globals& g, const std::string& log, const std::string& dataset,
                       const std::string& host, int port, int k_msg) {
  Registry::Options opts;
  if (g.seed) {
    auto counter = std::make_shared<std::atomic<std::uint64_t>>(0);
    const std::uint64_t seed = *g.seed;
    opts.keys = [seed, counter] {
      return sample_key(seeded_entropy(seed, "serve:" + std::to_string((*counter)++), 16));
    };
  }
  Registry reg(log, ChallengeSet::from_lines(load_corpus(dataset), static_cast<std::size_t>(k_msg)), opts);
  HttpService service;
  install_registry_routes(service.server(), reg);
  std::cerr << "registry listening on " << host << ":" << port << "\n";
  service.run(host, port);
  return 0;
}

int cmd_serve_oracle(const Globals& g, const std::string& table, const std::string& noise,
                     const std::string& host, int port) {
  const std::uint64_t seed = g.seed_or_default();
  std::shared_ptr<const SuspectChannel> channel =
      table.empty() ? std::make_shared<TableChannel>(oracle_base(seed))
                    : std::make_shared<TableChannel>(
                          oracle_fingerprinted(load_table(table), parse_noise(noise, seed), seed));
  HttpService service;
  install_respond_route(service.server(), channel);
  std::cerr << "oracle listening on " << host << ":" << port << "\n";
  service.run(host, port);
  return 0;
}

int run(int argc, char** argv) {
  CLI::App app{"lmfp: keyed fingerprints for language models"};
  app.require_subcommand(1);
  Globals g;
  std::uint64_t seed_value = 0;
  auto* seed_opt = app.add_option("--seed", seed_value, "Seed for all randomness");
  app.add_option("--out-dir", g.out_dir, "Directory for report and artifact files");
  app.add_option("--format", g.format, "Stdout format")->check(CLI::IsMember({"text", "csv"}));

  std::function<int()> action;

  auto* keygen = app.add_subcommand("keygen", "Sample a secret key");
  int key_digits = kDefaultKeyDigits;
  std::string key_name = "key.txt";
  keygen->add_option("--k", key_digits, "Hex digits")->check(CLI::Range(1, 256));
  keygen->add_option("--name", key_name, "Output file name");
  keygen->callback([&] { action = [&] { return cmd_keygen(g, key_digits, key_name); }; });

  EncoderFlags ef;
  RsFlags rf;

  auto* build = app.add_subcommand("build-encoder", "Build and serialize the keyed encoder");
  std::string key_path, encoder_name = "encoder.bin";
  build->add_option("--key", key_path, "Key file")->required()->check(CLI::ExistingFile);
  build->add_option("--name", encoder_name, "Output file name");
  ef.add(build);
  build->callback([&] { action = [&] { return cmd_build_encoder(g, key_path, ef, encoder_name); }; });

  auto* enc = app.add_subcommand("encode", "Encode every corpus line");
  std::string encoder_path, corpus, ct_name = "ciphertexts.txt";
  enc->add_option("--encoder", encoder_path, "Encoder file")->required()->check(CLI::ExistingFile);
  enc->add_option("--corpus", corpus, "Plaintext file, one per line (default: bundled)")
      ->check(CLI::ExistingFile);
  enc->add_option("--name", ct_name, "Output file name");
  enc->callback([&] { action = [&] { return cmd_encode(g, encoder_path, corpus, ct_name); }; });

  auto* inject = app.add_subcommand("inject", "Build the fingerprint table");
  bool no_rs = false;
  std::string table_name = "table.jsonl";
  inject->add_option("--encoder", encoder_path, "Encoder file")->required()->check(CLI::ExistingFile);
  inject->add_option("--corpus", corpus, "Plaintext file (default: bundled)")->check(CLI::ExistingFile);
  inject->add_flag("--no-rs", no_rs, "Respond with the plaintext instead of a codeword");
  inject->add_option("--name", table_name, "Output file name");
  rf.add(inject);
  inject->callback([&] { action = [&] { return cmd_inject(g, encoder_path, corpus, rf, no_rs, table_name); }; });

  auto* reg = app.add_subcommand("register", "Register an owner with the authority log");
  std::string log_path, dataset, owner;
  reg->add_option("--log", log_path, "Registry log")->required();
  reg->add_option("--dataset", dataset, "Challenge dataset (default: bundled)")->check(CLI::ExistingFile);
  reg->add_option("--owner", owner, "Owner id")->required();
  ef.add(reg);
  rf.add(reg);
  reg->callback([&] { action = [&] { return cmd_register(g, log_path, dataset, owner, ef, rf); }; });

  auto* ver = app.add_subcommand("verify", "Query a suspect channel and judge ownership");
  VerifyFlags vf;
  ver->add_option("--encoder", vf.encoder, "Encoder file")->required()->check(CLI::ExistingFile);
  ver->add_option("--channel", vf.channel, "base, table:PATH or http://host:port");
  ver->add_option("--corpus", vf.corpus, "Challenge plaintexts (default: bundled)")->check(CLI::ExistingFile);
  ver->add_option("--registry", vf.registry, "Draw fresh challenges from this registry log");
  ver->add_option("--dataset", vf.dataset, "Registry dataset (default: bundled)")->check(CLI::ExistingFile);
  ver->add_option("--owner", vf.owner, "Owner id for --registry");
  ver->add_option("--noise", vf.noise, "kind:strength applied to responses");
  ver->add_option("--alpha", vf.alpha, "Decision threshold")->check(CLI::Range(0.0, 1.0));
  ver->add_flag("--no-rs", vf.no_rs, "Score raw responses without decoding");
  ver->add_option("--challenges", vf.challenges, "Number of challenges")->check(CLI::PositiveNumber);
  rf.add(ver);
  ver->callback([&] { action = [&] { return cmd_verify(g, vf, rf); }; });

  auto* bench = app.add_subcommand("attack-bench", "FSR under response manipulation");
  int challenges = 100;
  std::vector<double> strengths;
  std::vector<std::string> kinds;
  double alpha = kDefaultAlpha;
  bench->add_option("--challenges", challenges, "Challenges per cell")->check(CLI::Range(1, 1000));
  bench->add_option("--strengths", strengths, "Strengths (default 0.05 0.1 0.2 0.4)")
      ->check(CLI::Range(0.0, 1.0));
  bench->add_option("--attacks", kinds, "Attack kinds (default: all)");
  bench->add_option("--alpha", alpha, "Decision threshold")->check(CLI::Range(0.0, 1.0));
  rf.add(bench);
  bench->callback([&] {
    action = [&] { return cmd_attack_bench(g, challenges, strengths, kinds, rf, alpha); };
  });

  auto* aval = app.add_subcommand("avalanche", "Diffusion and confusion statistics");
  int trials = 1000, key_pairs = 100;
  aval->add_option("--trials", trials, "Trials per measure")
      ->check(CLI::Range(kMinAvalancheTrials, 1000000));
  aval->add_option("--key-pairs", key_pairs, "Key pairs for the weight comparison")
      ->check(CLI::Range(1, 100000));
  ef.add(aval);
  aval->callback([&] { action = [&] { return cmd_avalanche(g, trials, key_pairs, ef); }; });

  auto* unl = app.add_subcommand("unlearn-bench", "FSR as pairs are unlearned");
  int max_unlearn = 10;
  unl->add_option("--challenges", challenges, "Table size")->check(CLI::Range(10, 1000));
  unl->add_option("--max", max_unlearn, "Pairs to unlearn")->check(CLI::NonNegativeNumber);
  unl->add_option("--alpha", alpha, "Decision threshold")->check(CLI::Range(0.0, 1.0));
  rf.add(unl);
  unl->callback([&] { action = [&] { return cmd_unlearn_bench(g, challenges, max_unlearn, rf, alpha); }; });

  std::string host = "127.0.0.1";
  int port = 8080;
  auto* sreg = app.add_subcommand("serve-registry", "Run the registration authority over HTTP");
  sreg->add_option("--log", log_path, "Registry log")->required();
  sreg->add_option("--dataset", dataset, "Challenge dataset (default: bundled)")->check(CLI::ExistingFile);
  sreg->add_option("--host", host, "Bind address");
  sreg->add_option("--port", port, "Port")->check(CLI::Range(1, 65535));
  rf.add(sreg);
  sreg->callback([&] {
    action = [&] { return cmd_serve_registry(g, log_path, dataset, host, port, rf.params().k_msg); };
  });

  auto* sor = app.add_subcommand("serve-oracle", "Serve a table-backed oracle on POST /respond");
  std::string table, noise;
  sor->add_option("--table", table, "Fingerprint table (default: base oracle)")->check(CLI::ExistingFile);
  sor->add_option("--noise", noise, "kind:strength applied to table hits");
  sor->add_option("--host", host, "Bind address");
  sor->add_option("--port", port, "Port")->check(CLI::Range(1, 65535));
  sor->callback([&] { action = [&] { return cmd_serve_oracle(g, table, noise, host, port); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  if (*seed_opt) g.seed = seed_value;

  try {
    return action();
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace
}  // namespace lmfp

int main(int argc, char** argv) { return lmfp::run(argc, argv); }
