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

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <regex>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <gtest/gtest.h>

#include "lmfp/registry_server.hpp"
#include "lmfp/rng.hpp"
#include "lmfp/verifier.hpp"

namespace lmfp {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("lmfp_registry_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

ChallengeSet numbered_dataset(int n) {
  std::vector<std::string> lines;
  for (int i = 0; i < n; ++i) lines.push_back("challenge sentence number " + std::to_string(i));
  return ChallengeSet::from_lines(lines, 39);
}

// Random lowercase lines. Numbered lines differ in a trailing byte only and
// can share a ciphertext, which build_table rejects.
ChallengeSet random_dataset(int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::string> lines;
  for (int i = 0; i < n; ++i) {
    std::string s(32, 'a');
    for (auto& c : s) c = static_cast<char>('a' + rng.below(26));
    lines.push_back(std::move(s));
  }
  return ChallengeSet::from_lines(lines, 39);
}

// Deterministic keys: seeded entropy with a per-registry counter.
Registry::Options seeded_options(std::uint64_t seed) {
  auto counter = std::make_shared<std::uint64_t>(0);
  Registry::Options o;
  o.keys = [seed, counter] { return sample_key(seeded_entropy(seed, "key" + std::to_string((*counter)++), 16)); };
  o.clock = [] { return std::int64_t{1760000000}; };
  return o;
}

TEST(ChallengeSetTest, FromLines) {
  const ChallengeSet a = ChallengeSet::from_lines({"one", std::string(50, 'x')}, 39);
  EXPECT_EQ(a.items.size(), 2u);
  EXPECT_EQ(a.items[1].plaintext.size(), 39u);
  EXPECT_EQ(a.items[1].id, 1);
  EXPECT_EQ(a.dataset_id, ChallengeSet::from_lines({"one", std::string(50, 'x')}, 39).dataset_id);
  EXPECT_NE(a.dataset_id, ChallengeSet::from_lines({"one", "two"}, 39).dataset_id);
  // Multi-byte characters are never split.
  EXPECT_EQ(truncate_utf8("ab\xD0\x85", 3), "ab");
}

TEST(RegistryTest, RegisterFreshAndDuplicate) {
  TempDir dir;
  Registry reg(dir.file("log.jsonl"), numbered_dataset(20), seeded_options(1));
  auto [key, rec] = reg.register_owner("acme");
  EXPECT_EQ(rec.owner_id, "acme");
  EXPECT_TRUE(rec.used_challenge_ids.empty());
  EXPECT_EQ(rec.key_digest, to_hex(Sha256::hash(as_bytes(key.hex()))));
  EXPECT_EQ(rec.dataset_id, reg.dataset().dataset_id);
  EXPECT_EQ(reg.record("acme"), rec);
  EXPECT_THROW(reg.register_owner("acme"), ConflictError);
  EXPECT_THROW(reg.register_owner(""), std::invalid_argument);
  EXPECT_FALSE(reg.record("nobody").has_value());
}

TEST(RegistryTest, OwnersGetDistinctKeys) {
  TempDir dir;
  Registry reg(dir.file("log.jsonl"), numbered_dataset(5));
  const auto a = reg.register_owner("a").first;
  const auto b = reg.register_owner("b").first;
  EXPECT_NE(a.hex(), b.hex());
  EXPECT_EQ(a.digits(), 32);
}

TEST(RegistryTest, ConsecutiveDisputesAreDisjoint) {
  TempDir dir;
  Registry reg(dir.file("log.jsonl"), numbered_dataset(20), seeded_options(2));
  reg.register_owner("acme");
  const auto first = reg.next_challenges("acme", 5);
  const auto second = reg.next_challenges("acme", 5);
  std::set<int> ids;
  for (const auto& c : first) ids.insert(c.id);
  for (const auto& c : second) EXPECT_FALSE(ids.count(c.id));
  EXPECT_EQ(reg.record("acme")->used_challenge_ids.size(), 10u);
}

TEST(RegistryTest, ExhaustionAndBadRequests) {
  TempDir dir;
  Registry reg(dir.file("log.jsonl"), numbered_dataset(6), seeded_options(3));
  reg.register_owner("acme");
  reg.next_challenges("acme", 4);
  EXPECT_THROW(reg.next_challenges("acme", 3), ExhaustionError);
  EXPECT_EQ(reg.next_challenges("acme", 2).size(), 2u);
  EXPECT_THROW(reg.next_challenges("acme", 1), ExhaustionError);
  EXPECT_THROW(reg.next_challenges("acme", 0), std::invalid_argument);
  EXPECT_THROW(reg.next_challenges("ghost", 1), NotFoundError);
}

TEST(RegistryTest, ReplayRestoresState) {
  TempDir dir;
  const std::string log = dir.file("log.jsonl");
  FingerprintRecord before;
  {
    Registry reg(log, numbered_dataset(20), seeded_options(4));
    reg.register_owner("acme");
    reg.register_owner("globex", EncoderConfig{.num_layers = 3, .dim = 16}, RsParams{63, 39});
    reg.next_challenges("acme", 3);
    before = *reg.record("globex");
  }
  Registry again(log, numbered_dataset(20), seeded_options(4));
  EXPECT_EQ(again.record("acme")->used_challenge_ids, (std::set<int>{0, 1, 2}));
  EXPECT_EQ(*again.record("globex"), before);
  EXPECT_EQ(again.next_challenges("acme", 1)[0].id, 3);
  EXPECT_THROW(again.register_owner("acme"), ConflictError);
}

TEST(RegistryTest, CrashAfterBurnNeverReissues) {
  TempDir dir;
  const std::string log = dir.file("log.jsonl");
  std::set<int> lost;
  {
    Registry reg(log, numbered_dataset(20), seeded_options(5));
    reg.register_owner("acme");
    reg.set_fault_hook([](std::string_view stage) {
      if (stage == "after-burn") throw std::runtime_error("injected crash");
    });
    EXPECT_THROW(reg.next_challenges("acme", 4), std::runtime_error);
    // Same process: the ids are burned even though the call never returned.
    lost = reg.record("acme")->used_challenge_ids;
    EXPECT_EQ(lost.size(), 4u);
  }
  Registry restarted(log, numbered_dataset(20), seeded_options(5));
  EXPECT_EQ(restarted.record("acme")->used_challenge_ids, lost);
  for (const auto& c : restarted.next_challenges("acme", 16)) EXPECT_FALSE(lost.count(c.id));
  EXPECT_THROW(restarted.next_challenges("acme", 1), ExhaustionError);
}

TEST(RegistryTest, TornTailIsDiscarded) {
  TempDir dir;
  const std::string log = dir.file("log.jsonl");
  {
    Registry reg(log, numbered_dataset(20), seeded_options(6));
    reg.register_owner("acme");
  }
  {
    std::ofstream out(log, std::ios::app);
    out << R"({"op":"burn","owner_id":"acme","ids":[0,1)";
  }
  {
    Registry reg(log, numbered_dataset(20), seeded_options(6));
    EXPECT_TRUE(reg.record("acme")->used_challenge_ids.empty());
    EXPECT_EQ(reg.next_challenges("acme", 2)[0].id, 0);
  }
  Registry reg(log, numbered_dataset(20), seeded_options(6));
  EXPECT_EQ(reg.record("acme")->used_challenge_ids, (std::set<int>{0, 1}));
}

TEST(RegistryTest, CorruptLogIsAnError) {
  TempDir dir;
  const std::string log = dir.file("log.jsonl");
  std::ofstream(log) << "garbage\n";
  EXPECT_THROW(Registry(log, numbered_dataset(3)), std::runtime_error);
}

TEST(RegistryTest, DatasetChangeIsDetected) {
  TempDir dir;
  const std::string log = dir.file("log.jsonl");
  { Registry(log, numbered_dataset(5), seeded_options(7)).register_owner("acme"); }
  Registry other(log, numbered_dataset(6), seeded_options(7));
  EXPECT_THROW(other.next_challenges("acme", 1), std::runtime_error);
}

TEST(RegistryTest, LogNeverContainsKeys) {
  TempDir dir;
  const std::string log = dir.file("log.jsonl");
  std::vector<std::string> keys;
  {
    Registry reg(log, numbered_dataset(30), seeded_options(8));
    for (int i = 0; i < 10; ++i) {
      keys.push_back(reg.register_owner("owner" + std::to_string(i)).first.hex());
      reg.next_challenges("owner" + std::to_string(i), 2);
    }
  }
  const std::string text = read_file(log);
  const std::regex hex32("[0-9a-f]{32}");
  for (auto it = std::sregex_iterator(text.begin(), text.end(), hex32); it != std::sregex_iterator();
       ++it) {
    EXPECT_EQ(std::find(keys.begin(), keys.end(), it->str()), keys.end());
  }
  // Sliding check: no key appears anywhere, even inside a longer hex run.
  for (const auto& k : keys) EXPECT_EQ(text.find(k), std::string::npos);
}

TEST(RegistryTest, ConcurrentRequestsNeverDuplicate) {
  TempDir dir;
  Registry reg(dir.file("log.jsonl"), numbered_dataset(1000), seeded_options(9));
  reg.register_owner("acme");
  std::mutex mu;
  std::vector<int> issued;
  std::vector<std::thread> threads;
  for (int t = 0; t < 20; ++t) {
    threads.emplace_back([&] {
      for (int i = 0; i < 50; ++i) {
        const auto got = reg.next_challenges("acme", 1);
        std::lock_guard lock(mu);
        issued.push_back(got[0].id);
      }
    });
  }
  for (auto& t : threads) t.join();
  std::sort(issued.begin(), issued.end());
  EXPECT_EQ(issued.size(), 1000u);
  EXPECT_EQ(std::adjacent_find(issued.begin(), issued.end()), issued.end());
}

// ---------------------------------------------------------------------------
// HTTP
// ---------------------------------------------------------------------------

class RegistryServerTest : public ::testing::Test {
 protected:
  void SetUp() override {
    reg_ = std::make_unique<Registry>(dir_.file("log.jsonl"), random_dataset(1000, 77), seeded_options(10));
    install_registry_routes(service_.server(), *reg_);
    port_ = service_.start("127.0.0.1", 0);
  }
  void TearDown() override { service_.stop(); }

  httplib::Client client() const { return httplib::Client("127.0.0.1", port_); }

  httplib::Result post(const std::string& path, const nlohmann::json& body) const {
    return client().Post(path, body.dump(), "application/json");
  }

  TempDir dir_;
  std::unique_ptr<Registry> reg_;
  HttpService service_;
  int port_ = 0;
};

TEST_F(RegistryServerTest, Health) {
  const auto res = client().Get("/health");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
}

TEST_F(RegistryServerTest, StatusCodes) {
  auto res = post("/register", {{"owner_id", "acme"}});
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 201);
  const auto body = nlohmann::json::parse(res->body);
  EXPECT_EQ(body["key"].get<std::string>().size(), 32u);
  EXPECT_EQ(post("/register", {{"owner_id", "acme"}})->status, 409);
  EXPECT_EQ(client().Post("/register", "{", "application/json")->status, 400);
  EXPECT_EQ(post("/register", {{"name", "x"}})->status, 400);
  EXPECT_EQ(post("/register", {{"owner_id", "bad"}, {"rs_params", {{"n_code", 5}, {"k_msg", 9}}}})->status,
            400);
  EXPECT_EQ(post("/challenges/next", {{"owner_id", "ghost"}, {"count", 1}})->status, 404);
  EXPECT_EQ(post("/challenges/next", {{"owner_id", "acme"}, {"count", 1001}})->status, 410);
  EXPECT_EQ(post("/challenges/next", {{"owner_id", "acme"}, {"count", 0}})->status, 400);
  EXPECT_EQ(client().Get("/record/ghost")->status, 404);
  const auto rec = client().Get("/record/acme");
  ASSERT_TRUE(rec);
  EXPECT_EQ(rec->status, 200);
  EXPECT_EQ(nlohmann::json::parse(rec->body)["key_digest"], body["record"]["key_digest"]);
}

TEST_F(RegistryServerTest, ConcurrentHttpChallengesNeverDuplicate) {
  ASSERT_EQ(post("/register", {{"owner_id", "acme"}})->status, 201);
  std::mutex mu;
  std::vector<int> issued;
  std::vector<std::thread> threads;
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&] {
      httplib::Client cli("127.0.0.1", port_);
      for (int i = 0; i < 125; ++i) {
        const auto res = cli.Post("/challenges/next", R"({"owner_id":"acme","count":1})", "application/json");
        ASSERT_TRUE(res);
        ASSERT_EQ(res->status, 200);
        const auto id = nlohmann::json::parse(res->body)["challenges"][0]["id"].get<int>();
        std::lock_guard lock(mu);
        issued.push_back(id);
      }
    });
  }
  for (auto& t : threads) t.join();
  std::sort(issued.begin(), issued.end());
  EXPECT_EQ(issued.size(), 1000u);
  EXPECT_EQ(std::adjacent_find(issued.begin(), issued.end()), issued.end());
}

TEST_F(RegistryServerTest, HttpFlowMatchesInProcess) {
  TempDir other;
  Registry local(other.file("log.jsonl"), random_dataset(1000, 77), seeded_options(10));

  // In-process.
  auto [key, rec] = local.register_owner("acme");
  const auto items = local.next_challenges("acme", 5);

  // Over HTTP.
  const auto reg_res = post("/register", {{"owner_id", "acme"}});
  const auto reg_body = nlohmann::json::parse(reg_res->body);
  const auto ch_res = post("/challenges/next", {{"owner_id", "acme"}, {"count", 5}});
  const auto ch_body = nlohmann::json::parse(ch_res->body);

  EXPECT_EQ(reg_body["key"], key.hex());
  EXPECT_EQ(reg_body["record"].dump(), to_json(rec).dump());
  nlohmann::json local_items = nlohmann::json::array();
  for (const auto& c : items) local_items.push_back(to_json(c));
  EXPECT_EQ(ch_body["challenges"].dump(), local_items.dump());

  // Verification on both challenge lists gives identical verdict lines.
  const Encoder enc = build_encoder(SecretKey(reg_body["key"].get<std::string>()), rec.encoder_config);
  std::vector<std::string> plaintexts;
  for (const auto& c : items) plaintexts.push_back(c.plaintext);
  const auto ch = oracle_fingerprinted(build_table(enc, plaintexts, rec.rs_params, Scheme::kWithRs));
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto http_x = ch_body["challenges"][i]["plaintext"].get<std::string>();
    const auto a = verdict_record(items[i].id, verify(ch, enc, rec.rs_params, Plaintext(items[i].plaintext)));
    const auto b = verdict_record(ch_body["challenges"][i]["id"].get<int>(),
                                  verify(ch, enc, rec.rs_params, Plaintext(http_x)));
    EXPECT_EQ(a, b);
  }
  EXPECT_EQ(read_file(other.file("log.jsonl")), read_file(dir_.file("log.jsonl")));
}

}  // namespace
}  // namespace lmfp
