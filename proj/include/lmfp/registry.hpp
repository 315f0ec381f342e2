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

// Registration authority: owner records and challenge burning.
//
// State lives in an append-only JSON-lines log, one event per line:
//   {"op":"register","record":{...}}
//   {"op":"burn","owner_id":"...","ids":[...]}
// Each event is fsync'd before the in-memory state changes and before the
// caller sees a result, so a challenge id burned once stays burned across
// crashes. A torn final line (no trailing newline) is discarded on open.
// Raw keys never reach the log; records hold SHA-256(key hex).

#pragma once

#include <fcntl.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "lmfp/dataset.hpp"
#include "lmfp/json_io.hpp"
#include "lmfp/keymat.hpp"

namespace lmfp {

class ConflictError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotFoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ExhaustionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Challenge {
  int id = 0;
  std::string plaintext;

  friend bool operator==(const Challenge&, const Challenge&) = default;
};

struct ChallengeSet {
  std::string dataset_id;
  std::vector<Challenge> items;

  /// One item per line, truncated to max_bytes. The id is a content digest
  /// so a record can detect that its dataset file changed.
  static ChallengeSet from_lines(const std::vector<std::string>& lines, std::size_t max_bytes) {
    ChallengeSet set;
    Sha256 h;
    for (const auto& line : lines) {
      Challenge c{static_cast<int>(set.items.size()), truncate_utf8(line, max_bytes)};
      h.update(as_bytes(c.plaintext)).update(as_bytes("\n"));
      set.items.push_back(std::move(c));
    }
    const Digest d = h.finish();
    set.dataset_id = "sha256:" + to_hex(std::span(d).first(8));
    return set;
  }
};

struct FingerprintRecord {
  std::string owner_id;
  std::string key_digest;
  EncoderConfig encoder_config;
  RsParams rs_params = kDefaultRs;
  std::string dataset_id;
  std::set<int> used_challenge_ids;
  std::int64_t created_at = 0;  // unix seconds

  friend bool operator==(const FingerprintRecord&, const FingerprintRecord&) = default;
};

inline std::string key_digest(const SecretKey& key) {
  return to_hex(Sha256::hash(as_bytes(key.hex())));
}

inline nlohmann::json to_json(const FingerprintRecord& r) {
  return {{"owner_id", r.owner_id},
          {"key_digest", r.key_digest},
          {"encoder_config", to_json(r.encoder_config)},
          {"rs_params", to_json(r.rs_params)},
          {"dataset_id", r.dataset_id},
          {"used_challenge_ids", r.used_challenge_ids},
          {"created_at", r.created_at}};
}

inline FingerprintRecord record_from_json(const nlohmann::json& j) {
  FingerprintRecord r;
  r.owner_id = j.at("owner_id").get<std::string>();
  r.key_digest = j.at("key_digest").get<std::string>();
  r.encoder_config = encoder_config_from_json(j.at("encoder_config"));
  r.rs_params = rs_params_from_json(j.at("rs_params"));
  r.dataset_id = j.at("dataset_id").get<std::string>();
  r.used_challenge_ids = j.value("used_challenge_ids", std::set<int>{});
  r.created_at = j.value("created_at", std::int64_t{0});
  return r;
}

class Registry {
 public:
  using KeySource = std::function<SecretKey()>;
  using Clock = std::function<std::int64_t()>;
  // Called at "after-burn" (burn durable, result not yet returned) and
  // "after-register". Throwing from it simulates a crash at that point.
  using FaultHook = std::function<void(std::string_view stage)>;

  // Empty members fall back to OS entropy and the system clock.
  struct Options {
    KeySource keys;
    Clock clock;
  };

  using Snapshot = std::map<std::string, FingerprintRecord>;

  Registry(std::string log_path, ChallengeSet dataset, Options options = Options())
      : log_path_(std::move(log_path)), dataset_(std::move(dataset)), options_(std::move(options)) {
    if (!options_.keys) options_.keys = [] { return sample_key_os(); };
    if (!options_.clock) {
      options_.clock = [] {
        return static_cast<std::int64_t>(std::chrono::duration_cast<std::chrono::seconds>(
                                              std::chrono::system_clock::now().time_since_epoch())
                                              .count());
      };
    }
    if (dataset_.items.empty()) throw std::invalid_argument("registry needs a non-empty dataset");
    replay();
    fd_ = ::open(log_path_.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0600);
    if (fd_ < 0) throw std::runtime_error("cannot open registry log " + log_path_);
  }

  Registry(const Registry&) = delete;
  Registry& operator=(const Registry&) = delete;
  ~Registry() {
    if (fd_ >= 0) ::close(fd_);
  }

  const ChallengeSet& dataset() const { return dataset_; }
  const std::string& log_path() const { return log_path_; }

  void set_fault_hook(FaultHook hook) {
    std::lock_guard lock(writer_);
    hook_ = std::move(hook);
  }

  /// Lock-free read of the current state.
  std::shared_ptr<const Snapshot> snapshot() const { return std::atomic_load(&state_); }

  std::optional<FingerprintRecord> record(const std::string& owner_id) const {
    const auto snap = snapshot();
    const auto it = snap->find(owner_id);
    if (it == snap->end()) return std::nullopt;
    return it->second;
  }

  /// Samples a key, persists the record and returns the key. The key is not
  /// retrievable afterwards.
  std::pair<SecretKey, FingerprintRecord> register_owner(const std::string& owner_id,
                                                         const EncoderConfig& config = {},
                                                         const RsParams& params = kDefaultRs) {
    if (owner_id.empty()) throw std::invalid_argument("owner_id must be non-empty");
    config.validate();
    params.validate();
    std::lock_guard lock(writer_);
    const auto current = snapshot();
    if (current->count(owner_id)) throw ConflictError("owner already registered: " + owner_id);

    SecretKey key = options_.keys();
    FingerprintRecord rec;
    rec.owner_id = owner_id;
    rec.key_digest = key_digest(key);
    rec.encoder_config = config;
    rec.rs_params = params;
    rec.dataset_id = dataset_.dataset_id;
    rec.created_at = options_.clock();

    append({{"op", "register"}, {"record", to_json(rec)}});
    auto next = std::make_shared<Snapshot>(*current);
    next->emplace(owner_id, rec);
    std::atomic_store(&state_, std::shared_ptr<const Snapshot>(std::move(next)));
    if (hook_) hook_("after-register");
    return {std::move(key), std::move(rec)};
  }

  /// The `count` lowest unused challenge ids, burned before they are returned.
  std::vector<Challenge> next_challenges(const std::string& owner_id, int count) {
    if (count < 1) throw std::invalid_argument("challenge count must be >= 1");
    std::lock_guard lock(writer_);
    const auto current = snapshot();
    const auto it = current->find(owner_id);
    if (it == current->end()) throw NotFoundError("unknown owner: " + owner_id);
    const FingerprintRecord& rec = it->second;
    if (rec.dataset_id != dataset_.dataset_id) {
      throw std::runtime_error("record " + owner_id + " is bound to dataset " + rec.dataset_id);
    }

    std::vector<Challenge> out;
    for (const auto& item : dataset_.items) {
      if (static_cast<int>(out.size()) == count) break;
      if (!rec.used_challenge_ids.count(item.id)) out.push_back(item);
    }
    if (static_cast<int>(out.size()) < count) {
      throw ExhaustionError("dataset exhausted for " + owner_id + ": " + std::to_string(out.size()) +
                            " unused, " + std::to_string(count) + " requested");
    }
    std::vector<int> ids;
    for (const auto& c : out) ids.push_back(c.id);

    append({{"op", "burn"}, {"owner_id", owner_id}, {"ids", ids}});
    auto next = std::make_shared<Snapshot>(*current);
    next->at(owner_id).used_challenge_ids.insert(ids.begin(), ids.end());
    std::atomic_store(&state_, std::shared_ptr<const Snapshot>(std::move(next)));
    if (hook_) hook_("after-burn");
    return out;
  }

 private:
  void append(const nlohmann::json& event) {
    const std::string line = event.dump() + "\n";
    std::size_t done = 0;
    while (done < line.size()) {
      const ssize_t n = ::write(fd_, line.data() + done, line.size() - done);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw std::runtime_error("registry log write failed");
      }
      done += static_cast<std::size_t>(n);
    }
    if (::fsync(fd_) != 0) throw std::runtime_error("registry log fsync failed");
  }

  void replay() {
    auto state = std::make_shared<Snapshot>();
    if (std::filesystem::exists(log_path_)) {
      std::string text = read_file(log_path_);
      const std::size_t last_nl = text.rfind('\n');
      const std::size_t keep = last_nl == std::string::npos ? 0 : last_nl + 1;
      if (keep != text.size()) {
        std::filesystem::resize_file(log_path_, keep);
        text.resize(keep);
      }
      int lineno = 0;
      for (const auto& line : split_lines(text)) {
        ++lineno;
        const auto ev = nlohmann::json::parse(line, nullptr, false);
        if (!ev.is_object() || !ev.contains("op")) {
          throw std::runtime_error(log_path_ + ":" + std::to_string(lineno) + ": corrupt event");
        }
        const std::string op = ev["op"].get<std::string>();
        if (op == "register") {
          FingerprintRecord rec = record_from_json(ev.at("record"));
          const std::string id = rec.owner_id;
          state->insert_or_assign(id, std::move(rec));
        } else if (op == "burn") {
          const auto it = state->find(ev.at("owner_id").get<std::string>());
          if (it == state->end()) {
            throw std::runtime_error(log_path_ + ":" + std::to_string(lineno) + ": burn for unknown owner");
          }
          for (int id : ev.at("ids")) it->second.used_challenge_ids.insert(id);
        } else {
          throw std::runtime_error(log_path_ + ":" + std::to_string(lineno) + ": unknown op " + op);
        }
      }
    }
    state_ = std::move(state);
  }

  std::string log_path_;
  ChallengeSet dataset_;
  Options options_;
  FaultHook hook_;
  std::mutex writer_;
  int fd_ = -1;
  std::shared_ptr<const Snapshot> state_;
};

}  // namespace lmfp
