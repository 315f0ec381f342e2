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

// HTTP front end for the registry.
//
//   POST /register          {"owner_id", "encoder_config"?, "rs_params"?}
//                           -> 201 {"key", "record"}      409 duplicate owner
//   POST /challenges/next   {"owner_id", "count"}
//                           -> 200 {"challenges": [{"id", "plaintext"}]}
//                              404 unknown owner, 410 dataset exhausted
//   GET  /record/{owner_id} -> 200 record                  404
//   GET  /health            -> 200 {"status": "ok"}
// Malformed bodies get 400. Every error body is {"error": "..."}.

#pragma once

#include <string>

#include "lmfp/registry.hpp"
#include "lmfp/remote.hpp"

namespace lmfp {

inline nlohmann::json to_json(const Challenge& c) { return {{"id", c.id}, {"plaintext", c.plaintext}}; }

inline void install_registry_routes(httplib::Server& server, Registry& registry) {
  auto guarded = [](httplib::Response& res, auto&& fn) {
    try {
      fn();
    } catch (const ConflictError& e) {
      send_error(res, 409, e.what());
    } catch (const NotFoundError& e) {
      send_error(res, 404, e.what());
    } catch (const ExhaustionError& e) {
      send_error(res, 410, e.what());
    } catch (const nlohmann::json::exception& e) {
      send_error(res, 400, e.what());
    } catch (const std::invalid_argument& e) {
      send_error(res, 400, e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, e.what());
    }
  };

  server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, {{"status", "ok"}});
  });

  server.Post("/register", [&registry, guarded](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto body = nlohmann::json::parse(req.body);
      if (!body.is_object()) throw std::invalid_argument("expected a JSON object");
      const std::string owner = body.at("owner_id").get<std::string>();
      const EncoderConfig config = body.contains("encoder_config")
                                       ? encoder_config_from_json(body["encoder_config"])
                                       : EncoderConfig{};
      const RsParams params =
          body.contains("rs_params") ? rs_params_from_json(body["rs_params"]) : kDefaultRs;
      auto [key, record] = registry.register_owner(owner, config, params);
      send_json(res, 201, {{"key", key.hex()}, {"record", to_json(record)}});
    });
  });

  server.Post("/challenges/next",
              [&registry, guarded](const httplib::Request& req, httplib::Response& res) {
                guarded(res, [&] {
                  const auto body = nlohmann::json::parse(req.body);
                  if (!body.is_object()) throw std::invalid_argument("expected a JSON object");
                  const auto items = registry.next_challenges(body.at("owner_id").get<std::string>(),
                                                              body.at("count").get<int>());
                  nlohmann::json list = nlohmann::json::array();
                  for (const auto& c : items) list.push_back(to_json(c));
                  send_json(res, 200, {{"challenges", list}});
                });
              });

  server.Get(R"(/record/([^/]+))", [&registry, guarded](const httplib::Request& req,
                                                        httplib::Response& res) {
    guarded(res, [&] {
      const auto rec = registry.record(req.matches[1].str());
      if (!rec) throw NotFoundError("unknown owner: " + req.matches[1].str());
      send_json(res, 200, to_json(*rec));
    });
  });
}

}  // namespace lmfp
