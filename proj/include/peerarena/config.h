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

#ifndef PEERARENA_CONFIG_H_
#define PEERARENA_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "peerarena/agents.h"
#include "peerarena/matchmaking.h"
#include "peerarena/reputation.h"

namespace peerarena {

enum class TiePolicy {
  // Exact ties prefer the second combatant.
  kSecondWins,
  // Exact ties emit no preference pair.
  kDropPair,
};

std::string_view TiePolicyName(TiePolicy policy);

// Evenly spaced synthetic pool: skills from min_skill to max_skill.
struct LadderSpec {
  double min_skill = 1.0;
  double max_skill = 10.0;
  double generation_noise = 0.5;
  double judge_noise = 0.5;
  double judge_bias = 0.0;
  double learning_rate = 0.0;
};

struct ArenaConfig {
  int pool_size = 10;
  // Pool members are generated from `ladder` when set, otherwise taken from
  // `agents` verbatim.
  std::optional<LadderSpec> ladder = LadderSpec{};
  std::vector<Agent> agents;

  int iterations = 8;
  int prompts_per_iteration = 1000;
  MatchParams match;
  ReputationParams rep;
  std::uint64_t seed = 1234;
  TiePolicy tie_policy = TiePolicy::kSecondWins;
  int parallelism = 1;
  // Pipelines `parallelism` combats against one snapshot. Deterministic for a
  // fixed seed, but not equivalent to the sequential schedule.
  bool throughput_mode = false;
  std::optional<std::string> trainer_command;

  std::optional<std::string> prompt_file;
  int synthetic_prompts = 1000;
  std::optional<std::string> judge_template;
  // Prompts per iteration answered by every model for diversity analysis.
  int diversity_probes = 1;
  std::string output_dir = "arena_run";

  std::vector<Agent> MaterializeAgents() const;
  // Throws ConfigError naming the first violated constraint.
  void Validate() const;
};

nlohmann::json ToJson(const ArenaConfig& config);
// Missing keys take defaults; unknown keys are rejected.
ArenaConfig ConfigFromJson(const nlohmann::json& j);
// Parses JSON, permitting // comments.
ArenaConfig LoadConfig(const std::string& path);

// Default profile as commented JSON. Defaults that are not protocol
// hyperparameters carry a trailing comment.
std::string DefaultConfigText();

std::vector<std::string> PresetNames();
std::optional<ArenaConfig> Preset(std::string_view name);

// Applies `key=value` to a config. Dotted keys address nested fields
// ("match.alpha"). The shorthands generation_noise, judge_noise, judge_bias
// and learning_rate apply to the whole synthetic pool. Values parse as JSON,
// falling back to a plain string.
void ApplyOverride(ArenaConfig& config, std::string_view assignment);

}  // namespace peerarena

#endif  // PEERARENA_CONFIG_H_
