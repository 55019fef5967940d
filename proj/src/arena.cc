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

#include "peerarena/arena.h"

#include <spawn.h>
#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "json.hpp"
#include "peerarena/run_io.h"
#include "peerarena/types.h"

extern char** environ;

namespace peerarena {
namespace {

constexpr std::array<const char*, 8> kSyntheticTopics = {
    "explain a concept",      "solve a word problem", "summarize a passage",
    "write a short story",    "give step-by-step advice", "compare two options",
    "answer a trivia question", "draft a polite email"};

std::uint64_t U(std::int64_t v) { return static_cast<std::uint64_t>(v); }

// Winner/tie bookkeeping from the aggregated scores.
void Decide(CombatRecord& r, TiePolicy tie_policy) {
  const double s0 = r.aggregated[0]->value;
  const double s1 = r.aggregated[1]->value;
  if (s0 > s1) {
    r.winner = r.combatants[0];
  } else if (s0 < s1) {
    r.winner = r.combatants[1];
  } else {
    r.tie = true;
    if (tie_policy == TiePolicy::kSecondWins) r.winner = r.combatants[1];
  }
}

}  // namespace

std::vector<Prompt> LoadPrompts(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read prompt file: " + path);
  std::vector<Prompt> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::string text = line;
    if (line.front() == '{') {
      const auto j = nlohmann::json::parse(line, nullptr, false);
      if (j.is_object()) {
        if (j.contains("prompt")) {
          text = j["prompt"].get<std::string>();
        } else if (j.contains("instruction")) {
          text = j["instruction"].get<std::string>();
        }
      }
    }
    out.push_back(Prompt{static_cast<int>(out.size()), std::move(text)});
  }
  if (out.empty()) throw ConfigError("prompt file has no prompts: " + path);
  return out;
}

std::vector<Prompt> SyntheticPrompts(int count) {
  std::vector<Prompt> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    out.push_back(Prompt{i, "Instruction " + std::to_string(i) + ": " +
                                kSyntheticTopics[i % kSyntheticTopics.size()] +
                                "."});
  }
  return out;
}

std::vector<Prompt> SamplePrompts(std::span<const Prompt> source, int count,
                                  std::uint64_t seed, int iteration) {
  std::vector<Prompt> out;
  out.reserve(count);
  std::vector<std::size_t> order(source.size());
  for (std::uint64_t pass = 0; static_cast<int>(out.size()) < count; ++pass) {
    std::iota(order.begin(), order.end(), 0);
    Rng rng = MakeStream(seed, StreamKind::kPromptShuffle, {U(iteration), pass});
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t idx : order) {
      if (static_cast<int>(out.size()) == count) break;
      out.push_back(source[idx]);
    }
  }
  return out;
}

std::optional<PreferencePair> BuildPreferencePair(const CombatRecord& record,
                                                  TiePolicy tie_policy,
                                                  std::span<const Agent> agents) {
  if (record.void_combat || !record.aggregated[0] || !record.aggregated[1]) {
    return std::nullopt;
  }
  const double s0 = record.aggregated[0]->value;
  const double s1 = record.aggregated[1]->value;
  int chosen;
  if (s0 > s1) {
    chosen = 0;
  } else if (s0 < s1) {
    chosen = 1;
  } else if (tie_policy == TiePolicy::kSecondWins) {
    chosen = 1;
  } else {
    return std::nullopt;
  }
  const int rejected = 1 - chosen;
  PreferencePair pair;
  pair.prompt = record.prompt.text;
  pair.chosen = record.responses[chosen].text;
  pair.rejected = record.responses[rejected].text;
  pair.margin = std::abs(s0 - s1);
  pair.iteration = record.iteration;
  pair.combat_id = record.combat_id;
  pair.chosen_label = agents[record.combatants[chosen].value].label;
  pair.rejected_label = agents[record.combatants[rejected].value].label;
  return pair;
}

Arena::Arena(ArenaConfig config, std::vector<Prompt> prompts, JudgeTemplate rubric)
    : config_(std::move(config)),
      agents_(config_.MaterializeAgents()),
      prompts_(std::move(prompts)),
      rubric_(std::move(rubric)),
      reputations_(agents_.size(), InitialReputation(config_.rep)) {
  if (prompts_.empty()) throw ConfigError("arena needs at least one prompt");
}

std::vector<PoolEntry> Arena::PoolSnapshot() const {
  std::vector<PoolEntry> out;
  out.reserve(agents_.size());
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    out.push_back(PoolEntry{agents_[i].id, reputations_[i].reputation});
  }
  return out;
}

std::optional<std::size_t> Arena::BeginIteration(int iteration) {
  return ApplyReweighting(reputations_, iteration, config_.rep);
}

CombatRecord Arena::PlayCombat(int iteration, std::int64_t combat_id,
                               const Prompt& prompt, const MatchSelection& match,
                               int judge_threads) const {
  CombatRecord r;
  r.iteration = iteration;
  r.combat_id = combat_id;
  r.prompt = prompt;
  r.combatants = {match.first, match.opponent};
  r.random_branch = match.random_branch;
  r.proximity_rank = match.proximity_rank;

#pragma omp parallel for num_threads(2) if (judge_threads > 1)
  for (int side = 0; side < 2; ++side) {
    const Agent& agent = agents_[r.combatants[side].value];
    Rng rng = MakeStream(config_.seed, StreamKind::kGeneration,
                         {U(iteration), U(combat_id), U(agent.id.value)});
    r.responses[side] = Generate(agent, prompt.text, rng);
  }
  for (int side = 0; side < 2; ++side) {
    if (!r.responses[side].ok) {
      r.void_combat = true;
      r.void_reason = "generation failed for " +
                      agents_[r.combatants[side].value].label + ": " +
                      r.responses[side].error;
      return r;
    }
  }

  std::vector<const Agent*> panel;
  for (const Agent& a : agents_) {
    if (a.id == r.combatants[0] || a.id == r.combatants[1]) continue;
    panel.push_back(&a);
    r.judges.push_back(a.id);
    r.judge_weights.push_back(
        EffectiveJudgeWeight(reputations_[a.id.value], config_.rep));
  }
  const PanelRequest request{prompt.text, &r.responses[0], &r.responses[1],
                             MixSeed(config_.seed, {U(iteration), U(combat_id)})};
  PanelScores scores = judge_threads > 1
                           ? ScorePanel(request, panel, rubric_, judge_threads)
                           : ScorePanelSerial(request, panel, rubric_);
  r.scores = {std::move(scores.first), std::move(scores.second)};
  try {
    for (int side = 0; side < 2; ++side) {
      r.aggregated[side] = Aggregate(r.scores[side], r.judge_weights);
    }
  } catch (const VoidJudgment& e) {
    r.aggregated = {};
    r.void_combat = true;
    r.void_reason = e.what();
    return r;
  }
  Decide(r, config_.tie_policy);
  return r;
}

void Arena::Commit(CombatRecord& r) {
  ReputationState& a = reputations_[r.combatants[0].value];
  ReputationState& b = reputations_[r.combatants[1].value];
  r.reputation_before = {a.reputation, b.reputation};
  if (!r.void_combat) {
    auto [next_a, next_b] = UpdateReputation(
        a, b, r.aggregated[0]->value, r.aggregated[1]->value, config_.rep);
    a = std::move(next_a);
    b = std::move(next_b);
  }
  r.reputation_after = {a.reputation, b.reputation};
}

std::vector<ProbeResponse> Arena::Probe(int iteration,
                                        std::span<const Prompt> prompts) const {
  const int count = std::min<int>(config_.diversity_probes, prompts.size());
  const int m = static_cast<int>(agents_.size());
  std::vector<ProbeResponse> out(static_cast<std::size_t>(count) * m);
#pragma omp parallel for num_threads(config_.parallelism) if (config_.parallelism > 1)
  for (int idx = 0; idx < count * m; ++idx) {
    const Prompt& prompt = prompts[idx / m];
    const Agent& agent = agents_[idx % m];
    Rng rng = MakeStream(config_.seed, StreamKind::kProbe,
                         {U(iteration), U(prompt.id), U(agent.id.value)});
    out[idx] = ProbeResponse{iteration, prompt, agent.id, agent.label,
                             Generate(agent, prompt.text, rng)};
  }
  return out;
}

IterationResult Arena::RunIteration(int iteration) {
  IterationResult result;
  const std::vector<Prompt> prompts = SamplePrompts(
      prompts_, config_.prompts_per_iteration, config_.seed, iteration);
  Rng match_rng = MakeStream(config_.seed, StreamKind::kMatchmaking, {U(iteration)});
  result.records.reserve(prompts.size());
  const int n = static_cast<int>(prompts.size());

  if (!config_.throughput_mode || config_.parallelism == 1) {
    for (int c = 0; c < n; ++c) {
      const std::vector<PoolEntry> snapshot = PoolSnapshot();
      const MatchSelection match = SelectPair(snapshot, config_.match, match_rng);
      CombatRecord record = PlayCombat(iteration, next_combat_id_++, prompts[c],
                                       match, config_.parallelism);
      Commit(record);
      result.records.push_back(std::move(record));
    }
  } else {
    // Every combat in a batch is matched and judged against the batch-start
    // snapshot; commits then apply in sequence order.
    for (int start = 0; start < n; start += config_.parallelism) {
      const int stop = std::min(n, start + config_.parallelism);
      const std::vector<PoolEntry> snapshot = PoolSnapshot();
      std::vector<MatchSelection> matches;
      for (int c = start; c < stop; ++c) {
        matches.push_back(SelectPair(snapshot, config_.match, match_rng));
      }
      std::vector<CombatRecord> batch(stop - start);
      const std::int64_t first_id = next_combat_id_;
#pragma omp parallel for num_threads(config_.parallelism) schedule(dynamic)
      for (int c = start; c < stop; ++c) {
        batch[c - start] = PlayCombat(iteration, first_id + (c - start), prompts[c],
                                      matches[c - start], 1);
      }
      next_combat_id_ += stop - start;
      for (CombatRecord& record : batch) {
        Commit(record);
        result.records.push_back(std::move(record));
      }
    }
  }

  IterationStats& stats = result.stats;
  stats.iteration = iteration;
  stats.proximity_ranks.assign(agents_.size() - 1, 0);
  for (const CombatRecord& r : result.records) {
    ++stats.combats;
    if (r.void_combat) ++stats.void_combats;
    if (r.tie) ++stats.ties;
    if (r.random_branch) ++stats.random_branch;
    ++stats.proximity_ranks[r.proximity_rank - 1];
    if (auto pair = BuildPreferencePair(r, config_.tie_policy, agents_)) {
      result.pairs.push_back(std::move(*pair));
    }
  }
  stats.pairs = static_cast<int>(result.pairs.size());
  result.probes = Probe(iteration, prompts);
  return result;
}

void Arena::EndIteration(const IterationResult& result) {
  const std::size_t m = agents_.size();
  std::vector<int> wins(m, 0), losses(m, 0), combats(m, 0);
  for (const CombatRecord& r : result.records) {
    if (r.void_combat) continue;
    for (ModelId id : r.combatants) ++combats[id.value];
    if (!r.winner) continue;
    const ModelId loser =
        *r.winner == r.combatants[0] ? r.combatants[1] : r.combatants[0];
    ++wins[r.winner->value];
    ++losses[loser.value];
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (agents_[i].synthetic()) {
      agents_[i].profile() =
          SyntheticLearn(agents_[i].profile(), wins[i], losses[i], combats[i]);
    }
  }
}

ReputationSnapshot Arena::Snapshot(int iteration) const {
  ReputationSnapshot s;
  s.iteration = iteration;
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    ModelSnapshot m;
    m.label = agents_[i].label;
    m.reputation = reputations_[i].reputation;
    m.deviation = reputations_[i].deviation;
    m.judging_weight = reputations_[i].judging_weight;
    m.locked = reputations_[i].reweight_locked;
    if (agents_[i].synthetic()) m.skill = agents_[i].profile().latent_skill;
    s.models.push_back(std::move(m));
  }
  return s;
}

void Arena::RunTrainer(int iteration, const std::string& pairs_path) const {
  // The command string goes through the shell; the hook arguments are passed
  // as positional parameters so paths and labels need no quoting.
  const std::string script = *config_.trainer_command + " \"$@\"";
  for (const Agent& agent : agents_) {
    std::vector<std::string> args = {"sh",      "-c",    script,     "sh",
                                     "--pairs", pairs_path, "--model", agent.label};
    std::vector<char*> argv;
    for (std::string& a : args) argv.push_back(a.data());
    argv.push_back(nullptr);
    pid_t pid = 0;
    if (posix_spawn(&pid, "/bin/sh", nullptr, nullptr, argv.data(), environ) != 0) {
      throw TrainerFailure("could not launch trainer command", iteration, -1);
    }
    int status = 0;
    waitpid(pid, &status, 0);
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
    if (code != 0) {
      throw TrainerFailure("trainer command failed for " + agent.label +
                               " at iteration " + std::to_string(iteration) +
                               " with exit code " + std::to_string(code),
                           iteration, code);
    }
  }
}

RunSummary Arena::Run(RunWriter* writer) {
  if (config_.trainer_command && writer == nullptr) {
    throw ConfigError("the trainer hook needs a run directory");
  }
  RunSummary summary;
  summary.matches_sequential_schedule =
      !(config_.throughput_mode && config_.parallelism > 1);
  summary.history.push_back(Snapshot(0));
  if (writer) {
    writer->WriteConfig(config_);
    writer->AppendSnapshot(summary.history.back());
  }
  for (int t = 1; t <= config_.iterations; ++t) {
    const std::optional<std::size_t> locked = BeginIteration(t);
    IterationResult result = RunIteration(t);
    if (locked) result.stats.newly_locked = static_cast<int>(*locked);
    EndIteration(result);
    summary.history.push_back(Snapshot(t));
    summary.iterations.push_back(result.stats);
    if (!writer) continue;
    writer->AppendCombats(result.records, agents_);
    const auto pairs_path = writer->WritePairs(t, result.pairs);
    if (!result.probes.empty()) writer->WriteProbes(t, result.probes);
    writer->AppendSnapshot(summary.history.back());
    if (config_.trainer_command) {
      try {
        RunTrainer(t, pairs_path.string());
      } catch (const TrainerFailure&) {
        writer->WriteManifest(summary, "trainer_failed");
        throw;
      }
    }
  }
  if (writer) writer->WriteManifest(summary, "completed");
  return summary;
}

}  // namespace peerarena
