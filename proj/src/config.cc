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

#include "peerarena/config.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "peerarena/types.h"

namespace peerarena {
namespace {

using json = nlohmann::json;

void CheckKeys(const json& j, std::string_view where,
               std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) {
    throw ConfigError(std::string(where) + " must be an object");
  }
  const std::set<std::string_view> known(allowed);
  for (const auto& item : j.items()) {
    if (!known.contains(item.key())) {
      throw ConfigError("unknown config key: " + std::string(where) +
                        (where.empty() ? "" : ".") + item.key());
    }
  }
}

template <typename T>
void Read(const json& j, const char* key, T& out) {
  if (!j.contains(key) || j.at(key).is_null()) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config key has the wrong type: ") + key);
  }
}

template <typename T>
void ReadOptional(const json& j, const char* key, std::optional<T>& out) {
  if (!j.contains(key)) return;
  if (j.at(key).is_null()) {
    out.reset();
    return;
  }
  T value{};
  Read(j, key, value);
  out = value;
}

json OptionalJson(const std::optional<std::string>& v) {
  return v ? json(*v) : json(nullptr);
}

json LadderToJson(const LadderSpec& l) {
  return {{"min_skill", l.min_skill},
          {"max_skill", l.max_skill},
          {"generation_noise", l.generation_noise},
          {"judge_noise", l.judge_noise},
          {"judge_bias", l.judge_bias},
          {"learning_rate", l.learning_rate}};
}

LadderSpec LadderFromJson(const json& j) {
  CheckKeys(j, "ladder", {"min_skill", "max_skill", "generation_noise",
                          "judge_noise", "judge_bias", "learning_rate"});
  LadderSpec l;
  Read(j, "min_skill", l.min_skill);
  Read(j, "max_skill", l.max_skill);
  Read(j, "generation_noise", l.generation_noise);
  Read(j, "judge_noise", l.judge_noise);
  Read(j, "judge_bias", l.judge_bias);
  Read(j, "learning_rate", l.learning_rate);
  return l;
}

json AgentToJson(const Agent& a) {
  if (a.synthetic()) {
    const AgentProfile& p = a.profile();
    return {{"label", a.label},
            {"type", "synthetic"},
            {"latent_skill", p.latent_skill},
            {"generation_noise", p.generation_noise},
            {"judge_noise", p.judge_noise},
            {"judge_bias", p.judge_bias},
            {"learning_rate", p.learning_rate}};
  }
  const EndpointDescriptor& e = a.endpoint();
  return {{"label", a.label},
          {"type", "remote"},
          {"base_url", e.base_url},
          {"model", e.model},
          {"auth_env", e.auth_env},
          {"timeout_seconds", e.timeout_seconds},
          {"max_retries", e.max_retries},
          {"temperature", e.temperature}};
}

Agent AgentFromJson(const json& j, int index) {
  Agent a;
  a.id = ModelId{index};
  std::string type = "synthetic";
  if (!j.is_object()) throw ConfigError("agents entries must be objects");
  Read(j, "type", type);
  Read(j, "label", a.label);
  if (a.label.empty()) a.label = "model-" + std::to_string(index + 1);
  if (type == "synthetic") {
    CheckKeys(j, "agents[]", {"label", "type", "latent_skill", "generation_noise",
                              "judge_noise", "judge_bias", "learning_rate"});
    AgentProfile p;
    Read(j, "latent_skill", p.latent_skill);
    Read(j, "generation_noise", p.generation_noise);
    Read(j, "judge_noise", p.judge_noise);
    Read(j, "judge_bias", p.judge_bias);
    Read(j, "learning_rate", p.learning_rate);
    a.backend = p;
  } else if (type == "remote") {
    CheckKeys(j, "agents[]", {"label", "type", "base_url", "model", "auth_env",
                              "timeout_seconds", "max_retries", "temperature"});
    EndpointDescriptor e;
    Read(j, "base_url", e.base_url);
    Read(j, "model", e.model);
    Read(j, "auth_env", e.auth_env);
    Read(j, "timeout_seconds", e.timeout_seconds);
    Read(j, "max_retries", e.max_retries);
    Read(j, "temperature", e.temperature);
    a.backend = e;
  } else {
    throw ConfigError("agent type must be \"synthetic\" or \"remote\": " + type);
  }
  return a;
}

void Require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

json* Resolve(json& root, std::string_view dotted) {
  json* node = &root;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = dotted.find('.', start);
    const std::string part(dotted.substr(start, dot - start));
    if (!node->is_object() || !node->contains(part)) return nullptr;
    node = &(*node)[part];
    if (dot == std::string_view::npos) return node;
    start = dot + 1;
  }
}

}  // namespace

std::string_view TiePolicyName(TiePolicy policy) {
  return policy == TiePolicy::kSecondWins ? "second_wins" : "drop_pair";
}

std::vector<Agent> ArenaConfig::MaterializeAgents() const {
  if (!ladder) return agents;
  std::vector<Agent> out;
  out.reserve(pool_size);
  for (int i = 0; i < pool_size; ++i) {
    const double step =
        pool_size > 1 ? (ladder->max_skill - ladder->min_skill) / (pool_size - 1)
                      : 0.0;
    AgentProfile p;
    p.latent_skill = ladder->min_skill + step * i;
    p.generation_noise = ladder->generation_noise;
    p.judge_noise = ladder->judge_noise;
    p.judge_bias = ladder->judge_bias;
    p.learning_rate = ladder->learning_rate;
    char label[32];
    std::snprintf(label, sizeof(label), "model-%02d", i + 1);
    out.push_back(Agent{ModelId{i}, label, p});
  }
  return out;
}

void ArenaConfig::Validate() const {
  Require(pool_size >= 3,
          "pool_size m must be >= 3 (two combatants plus at least one judge), got " +
              std::to_string(pool_size));
  if (!ladder) {
    Require(static_cast<int>(agents.size()) == pool_size,
            "pool_size (" + std::to_string(pool_size) +
                ") does not match the number of agents (" +
                std::to_string(agents.size()) + ")");
  }
  Require(iterations >= 1, "iterations T must be >= 1");
  Require(prompts_per_iteration >= 1, "prompts_per_iteration must be >= 1");
  Require(parallelism >= 1, "parallelism must be >= 1");
  Require(diversity_probes >= 0, "diversity_probes must be >= 0");
  Require(prompt_file || synthetic_prompts >= 1,
          "prompts.synthetic_count must be >= 1 when no prompt file is given");
  match.Validate(pool_size);
  rep.Validate();
  std::set<std::string> labels;
  for (const Agent& a : MaterializeAgents()) {
    Require(labels.insert(a.label).second, "duplicate agent label: " + a.label);
    if (a.synthetic()) {
      const AgentProfile& p = a.profile();
      Require(p.latent_skill >= 0 && p.latent_skill <= 10,
              a.label + ": latent_skill must be in [0, 10]");
      Require(p.generation_noise >= 0 && p.judge_noise >= 0,
              a.label + ": noise stddevs must be >= 0");
      Require(std::isfinite(p.judge_bias), a.label + ": judge_bias must be finite");
      Require(p.learning_rate >= 0, a.label + ": learning_rate must be >= 0");
    } else {
      const EndpointDescriptor& e = a.endpoint();
      Require(!e.base_url.empty(), a.label + ": base_url is required");
      Require(e.timeout_seconds > 0, a.label + ": timeout_seconds must be > 0");
      Require(e.max_retries >= 0, a.label + ": max_retries must be >= 0");
    }
  }
}

json ToJson(const ArenaConfig& c) {
  json j;
  j["seed"] = c.seed;
  j["pool_size"] = c.pool_size;
  j["iterations"] = c.iterations;
  j["prompts_per_iteration"] = c.prompts_per_iteration;
  j["tie_policy"] = TiePolicyName(c.tie_policy);
  j["parallelism"] = c.parallelism;
  j["throughput_mode"] = c.throughput_mode;
  j["trainer_command"] = OptionalJson(c.trainer_command);
  j["output_dir"] = c.output_dir;
  j["diversity_probes"] = c.diversity_probes;
  j["judge_template"] = OptionalJson(c.judge_template);
  j["prompts"] = {{"file", OptionalJson(c.prompt_file)},
                  {"synthetic_count", c.synthetic_prompts}};
  j["match"] = {{"alpha", c.match.alpha}, {"top_k", c.match.top_k}};
  const ReputationParams& r = c.rep;
  j["reputation"] = {{"kappa", r.kappa},
                     {"gamma", r.gamma},
                     {"reweighting_enabled", r.reweighting_enabled},
                     {"epsilon", r.epsilon},
                     {"sigma_min", r.sigma_min},
                     {"sigma_init", r.sigma_init},
                     {"window_n", r.window_n},
                     {"r_init", r.r_init},
                     {"r_floor", r.r_floor}};
  if (c.ladder) {
    j["ladder"] = LadderToJson(*c.ladder);
  } else {
    j["agents"] = json::array();
    for (const Agent& a : c.agents) j["agents"].push_back(AgentToJson(a));
  }
  return j;
}

ArenaConfig ConfigFromJson(const json& j) {
  CheckKeys(j, "", {"seed", "pool_size", "iterations", "prompts_per_iteration",
                    "tie_policy", "parallelism", "throughput_mode",
                    "trainer_command", "output_dir", "diversity_probes",
                    "judge_template", "prompts", "match", "reputation", "ladder",
                    "agents"});
  ArenaConfig c;
  Read(j, "seed", c.seed);
  Read(j, "iterations", c.iterations);
  Read(j, "prompts_per_iteration", c.prompts_per_iteration);
  Read(j, "parallelism", c.parallelism);
  Read(j, "throughput_mode", c.throughput_mode);
  ReadOptional(j, "trainer_command", c.trainer_command);
  Read(j, "output_dir", c.output_dir);
  Read(j, "diversity_probes", c.diversity_probes);
  ReadOptional(j, "judge_template", c.judge_template);
  if (j.contains("tie_policy")) {
    std::string name;
    Read(j, "tie_policy", name);
    if (name == "second_wins") {
      c.tie_policy = TiePolicy::kSecondWins;
    } else if (name == "drop_pair") {
      c.tie_policy = TiePolicy::kDropPair;
    } else {
      throw ConfigError("tie_policy must be second_wins or drop_pair: " + name);
    }
  }
  if (j.contains("prompts")) {
    const json& p = j.at("prompts");
    CheckKeys(p, "prompts", {"file", "synthetic_count"});
    ReadOptional(p, "file", c.prompt_file);
    Read(p, "synthetic_count", c.synthetic_prompts);
  }
  if (j.contains("match")) {
    const json& m = j.at("match");
    CheckKeys(m, "match", {"alpha", "top_k"});
    Read(m, "alpha", c.match.alpha);
    Read(m, "top_k", c.match.top_k);
  }
  if (j.contains("reputation")) {
    const json& r = j.at("reputation");
    CheckKeys(r, "reputation",
              {"kappa", "gamma", "reweighting_enabled", "epsilon", "sigma_min",
               "sigma_init", "window_n", "r_init", "r_floor"});
    Read(r, "kappa", c.rep.kappa);
    Read(r, "gamma", c.rep.gamma);
    Read(r, "reweighting_enabled", c.rep.reweighting_enabled);
    Read(r, "epsilon", c.rep.epsilon);
    Read(r, "sigma_min", c.rep.sigma_min);
    Read(r, "sigma_init", c.rep.sigma_init);
    Read(r, "window_n", c.rep.window_n);
    Read(r, "r_init", c.rep.r_init);
    Read(r, "r_floor", c.rep.r_floor);
  }
  if (j.contains("agents") && j.contains("ladder")) {
    throw ConfigError("give either agents or ladder, not both");
  }
  if (j.contains("agents")) {
    const json& list = j.at("agents");
    if (!list.is_array()) throw ConfigError("agents must be an array");
    c.ladder.reset();
    for (std::size_t i = 0; i < list.size(); ++i) {
      c.agents.push_back(AgentFromJson(list[i], static_cast<int>(i)));
    }
    c.pool_size = static_cast<int>(c.agents.size());
  } else if (j.contains("ladder")) {
    c.ladder = LadderFromJson(j.at("ladder"));
  }
  // An explicit pool_size wins so that a mismatch against agents is reported.
  Read(j, "pool_size", c.pool_size);
  return c;
}

ArenaConfig LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  json j;
  try {
    j = json::parse(buffer.str(), nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  return ConfigFromJson(j);
}

std::string DefaultConfigText() {
  static const std::set<std::string> kNonProtocol = {
      "epsilon", "sigma_min", "sigma_init", "window_n", "r_init", "r_floor"};
  std::istringstream lines(ToJson(ArenaConfig{}).dump(2));
  std::ostringstream out;
  out << "// Default arena profile. Keys marked \"not a protocol value\" are\n"
         "// engineering defaults; all others are protocol parameters.\n";
  std::string line;
  while (std::getline(lines, line)) {
    out << line;
    const auto quote = line.find('"');
    if (quote != std::string::npos) {
      const auto end = line.find('"', quote + 1);
      if (kNonProtocol.contains(line.substr(quote + 1, end - quote - 1))) {
        out << "  // not a protocol value";
      }
    }
    out << '\n';
  }
  return out.str();
}

std::vector<std::string> PresetNames() {
  return {"ladder10", "noisy10", "learn10", "tiny3"};
}

std::optional<ArenaConfig> Preset(std::string_view name) {
  ArenaConfig c;
  c.iterations = 8;
  c.prompts_per_iteration = 200;
  c.synthetic_prompts = 1000;
  c.seed = 20240607;
  c.ladder = LadderSpec{};
  c.output_dir = "runs/" + std::string(name);
  if (name == "ladder10") return c;
  if (name == "noisy10") {
    c.ladder->judge_noise = 10.0;
    return c;
  }
  if (name == "learn10") {
    c.ladder->learning_rate = 0.5;
    return c;
  }
  if (name == "tiny3") {
    c.pool_size = 3;
    c.match.top_k = 1;
    c.iterations = 2;
    c.prompts_per_iteration = 10;
    c.synthetic_prompts = 20;
    return c;
  }
  return std::nullopt;
}

void ApplyOverride(ArenaConfig& config, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError("override must look like key=value: " +
                      std::string(assignment));
  }
  const std::string key(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }
  json j = ToJson(config);
  static const std::set<std::string> kPoolWide = {
      "generation_noise", "judge_noise", "judge_bias", "learning_rate"};
  if (kPoolWide.contains(key)) {
    if (j.contains("ladder")) {
      j["ladder"][key] = value;
    } else {
      for (json& a : j["agents"]) {
        if (a.value("type", "synthetic") == "synthetic") a[key] = value;
      }
    }
  } else if (json* slot = Resolve(j, key)) {
    *slot = value;
  } else {
    throw ConfigError("unknown override key: " + key);
  }
  config = ConfigFromJson(j);
}

}  // namespace peerarena
