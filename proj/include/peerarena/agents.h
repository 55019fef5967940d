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

// Pool members. A synthetic agent is a seeded stand-in with a latent skill;
// a remote agent talks to an OpenAI-compatible chat-completions endpoint.

#ifndef PEERARENA_AGENTS_H_
#define PEERARENA_AGENTS_H_

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "peerarena/rng.h"
#include "peerarena/types.h"

namespace peerarena {

struct AgentProfile {
  // Latent quality on the judging scale, kept in [0, 10].
  double latent_skill = 5.0;
  double generation_noise = 0.0;
  double judge_noise = 0.0;
  double judge_bias = 0.0;
  double learning_rate = 0.0;
};

struct EndpointDescriptor {
  std::string base_url;
  std::string model;
  // Name of the environment variable holding the bearer token; may be empty.
  std::string auth_env;
  double timeout_seconds = 60.0;
  int max_retries = 2;
  double temperature = 0.7;
};

struct Agent {
  ModelId id;
  std::string label;
  std::variant<AgentProfile, EndpointDescriptor> backend;

  bool synthetic() const { return std::holds_alternative<AgentProfile>(backend); }
  const AgentProfile& profile() const { return std::get<AgentProfile>(backend); }
  AgentProfile& profile() { return std::get<AgentProfile>(backend); }
  const EndpointDescriptor& endpoint() const {
    return std::get<EndpointDescriptor>(backend);
  }
};

// A combatant's answer. `quality` is set only for synthetic agents and is
// never part of `text`.
struct Generation {
  std::string text;
  std::optional<double> quality;
  bool ok = true;
  std::string error;
  int attempts = 1;
};

struct ChatResult {
  std::optional<std::string> content;
  std::string error;
  int attempts = 0;
};

// One single-turn chat-completion exchange with retries. The whole call is
// bounded by timeout_seconds * (max_retries + 1).
ChatResult ChatCompletion(const EndpointDescriptor& endpoint,
                          std::string_view user_message);

Generation Generate(const Agent& agent, std::string_view prompt, Rng& rng);

// clamp(theta + N(0, generation_noise), 0, 10).
double SampleQuality(const AgentProfile& profile, Rng& rng);

// clamp(q + bias + N(0, judge_noise), 0, 10).
double JudgeSynthetic(const AgentProfile& profile, double quality, Rng& rng);

// theta += eta * (wins - losses) / max(combats, 1), clamped to [0, 10].
AgentProfile SyntheticLearn(AgentProfile profile, int wins, int losses,
                            int combats);

}  // namespace peerarena

#endif  // PEERARENA_AGENTS_H_
