// Copyright 2026 The Forge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// In-process HTTP server speaking the /v1/entail protocol, backed by the
// lexical oracle. Knobs inject overload, server errors and malformed bodies.

#ifndef FORGE_TESTS_FAKE_NLI_SERVER_H_
#define FORGE_TESTS_FAKE_NLI_SERVER_H_

#include <atomic>
#include <string>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "forge/entailment.h"

namespace forge::testing {

class FakeNliServer {
 public:
  enum class Mode { kNormal, kMalformedLabel, kShortResults, kBadSimplex };

  FakeNliServer() {
    server_.Post("/v1/entail", [this](const httplib::Request &req, httplib::Response &res) {
      handle(req, res);
    });
    server_.Get("/v1/info", [this](const httplib::Request &, httplib::Response &res) {
      res.set_content(nlohmann::json{{"model", "lexical-fake"},
                                     {"mnli_dev_accuracy", nullptr},
                                     {"max_batch", max_batch.load()}}
                          .dump(),
                      "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~FakeNliServer() { stop(); }

  void stop() {
    if (thread_.joinable()) {
      server_.stop();
      thread_.join();
    }
  }

  std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_); }

  std::atomic<int> fail_next{0};       // answer 503 this many times
  std::atomic<int> requests{0};
  std::atomic<int> pairs_seen{0};
  std::atomic<int> max_batch{1000};
  std::atomic<Mode> mode{Mode::kNormal};

  // Entailed pairs get P(entailment) = 0.9; others are neutral with 0.2.
  static nlohmann::json result_for(const std::string &premise, const std::string &hypothesis) {
    if (lexical_entails(premise, hypothesis)) {
      return {{"label", "entailment"},
              {"probs", {{"entailment", 0.9}, {"neutral", 0.07}, {"contradiction", 0.03}}}};
    }
    return {{"label", "neutral"},
            {"probs", {{"entailment", 0.2}, {"neutral", 0.7}, {"contradiction", 0.1}}}};
  }

 private:
  void handle(const httplib::Request &req, httplib::Response &res) {
    ++requests;
    if (fail_next.load() > 0) {
      --fail_next;
      res.status = 503;
      return;
    }
    nlohmann::json body;
    try {
      body = nlohmann::json::parse(req.body);
    } catch (...) {
      res.status = 400;
      return;
    }
    if (!body.contains("pairs") || !body["pairs"].is_array()) {
      res.status = 400;
      return;
    }
    if (static_cast<int>(body["pairs"].size()) > max_batch.load()) {
      res.status = 413;
      return;
    }
    nlohmann::json results = nlohmann::json::array();
    for (const auto &p : body["pairs"]) {
      const auto premise = p.at("premise").get<std::string>();
      if (premise.find("POISON") != std::string::npos) {
        res.status = 500;
        return;
      }
      results.push_back(result_for(premise, p.at("hypothesis").get<std::string>()));
      ++pairs_seen;
    }
    switch (mode.load()) {
      case Mode::kMalformedLabel:
        if (!results.empty()) results[results.size() - 1]["label"] = "maybe";
        break;
      case Mode::kShortResults:
        if (!results.empty()) results.erase(results.size() - 1);
        break;
      case Mode::kBadSimplex:
        if (!results.empty()) results[0]["probs"]["neutral"] = 0.5;
        break;
      case Mode::kNormal:
        break;
    }
    res.set_content(nlohmann::json{{"results", results}}.dump(), "application/json");
  }

  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

}  // namespace forge::testing

#endif  // FORGE_TESTS_FAKE_NLI_SERVER_H_
