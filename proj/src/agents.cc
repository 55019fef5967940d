// Copyright 2026 The PeerArena Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "peerarena/agents.h"

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdlib>
#include <random>
#include <stdexcept>

#include "httplib.h"
#include "json.hpp"

namespace peerarena {
namespace {

using json = nlohmann::json;

constexpr std::array<std::string_view, 32> kFillerWords = {
    "first",    "consider",  "the",      "key",      "point",    "is",
    "that",     "we",        "should",   "examine",  "each",     "step",
    "carefully", "because",  "details",  "matter",   "overall",  "this",
    "approach", "balances",  "clarity",  "and",      "depth",    "while",
    "staying",  "concise",   "finally",  "summarize", "answer",  "directly",
    "with",     "evidence"};

double NormalDraw(double stddev, Rng& rng) {
  if (stddev <= 0.0) return 0.0;
  std::normal_distribution<double> noise(0.0, stddev);
  return noise(rng);
}

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;    // prefix without trailing slash
};

SplitUrl Split(const std::string& base) {
  const auto scheme_end = base.find("://");
  const auto host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
  const auto slash = base.find('/', host_start);
  SplitUrl out;
  out.origin = slash == std::string::npos ? base : base.substr(0, slash);
  out.path = slash == std::string::npos ? "" : base.substr(slash);
  while (!out.path.empty() && out.path.back() == '/') out.path.pop_back();
  return out;
}

}  // namespace

ChatResult ChatCompletion(const EndpointDescriptor& endpoint,
                          std::string_view user_message) {
  ChatResult result;
  if (!(endpoint.timeout_seconds > 0)) {
    result.error = "endpoint timeout must be > 0";
    return result;
  }
  const SplitUrl url = Split(endpoint.base_url);
  json body = {{"model", endpoint.model},
               {"temperature", endpoint.temperature},
               {"messages", json::array({{{"role", "user"},
                                          {"content", std::string(user_message)}}})}};
  const std::string payload = body.dump();
  httplib::Headers headers;
  if (!endpoint.auth_env.empty()) {
    if (const char* token = std::getenv(endpoint.auth_env.c_str())) {
      headers.emplace("Authorization", std::string("Bearer ") + token);
    }
  }
  // Connect and read share one per-attempt budget.
  const auto half = std::chrono::duration<double>(endpoint.timeout_seconds / 2);
  const auto half_us = std::chrono::duration_cast<std::chrono::microseconds>(half);
  const int attempts = std::max(endpoint.max_retries, 0) + 1;
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    result.attempts = attempt;
    httplib::Client client(url.origin);
    client.set_connection_timeout(half_us);
    client.set_read_timeout(half_us);
    client.set_write_timeout(half_us);
    auto response = client.Post(url.path + "/v1/chat/completions", headers,
                                payload, "application/json");
    if (!response) {
      result.error = "transport error: " + httplib::to_string(response.error());
      continue;
    }
    if (response->status != 200) {
      result.error = "HTTP status " + std::to_string(response->status);
      continue;
    }
    try {
      const json parsed = json::parse(response->body);
      result.content =
          parsed.at("choices").at(0).at("message").at("content").get<std::string>();
      result.error.clear();
      return result;
    } catch (const json::exception& e) {
      result.error = std::string("malformed completion: ") + e.what();
    }
  }
  return result;
}

double SampleQuality(const AgentProfile& profile, Rng& rng) {
  return std::clamp(profile.latent_skill + NormalDraw(profile.generation_noise, rng),
                    0.0, 10.0);
}

double JudgeSynthetic(const AgentProfile& profile, double quality, Rng& rng) {
  return std::clamp(
      quality + profile.judge_bias + NormalDraw(profile.judge_noise, rng), 0.0,
      10.0);
}

AgentProfile SyntheticLearn(AgentProfile profile, int wins, int losses,
                            int combats) {
  if (profile.learning_rate == 0.0) return profile;
  const double step = profile.learning_rate * (wins - losses) /
                      std::max(combats, 1);
  profile.latent_skill = std::clamp(profile.latent_skill + step, 0.0, 10.0);
  return profile;
}

Generation Generate(const Agent& agent, std::string_view prompt, Rng& rng) {
  Generation out;
  if (agent.synthetic()) {
    out.quality = SampleQuality(agent.profile(), rng);
    std::uniform_int_distribution<int> length(6, 12);
    std::uniform_int_distribution<std::size_t> word(0, kFillerWords.size() - 1);
    out.text = agent.label + " on \"" + std::string(prompt) + "\":";
    for (int i = 0, n = length(rng); i < n; ++i) {
      out.text += ' ';
      out.text += kFillerWords[word(rng)];
    }
    out.text += '.';
    return out;
  }
  ChatResult chat = ChatCompletion(agent.endpoint(), prompt);
  out.attempts = chat.attempts;
  if (!chat.content) {
    out.ok = false;
    out.error = chat.error;
    return out;
  }
  out.text = std::move(*chat.content);
  return out;
}

}  // namespace peerarena
