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

// The combat loop. Each iteration samples prompts, pairs models through
// match-making, has the rest of the pool judge both answers, commits the
// reputation update and collects preference pairs for the trainer.

#ifndef PEERARENA_ARENA_H_
#define PEERARENA_ARENA_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "peerarena/agents.h"
#include "peerarena/config.h"
#include "peerarena/judging.h"
#include "peerarena/matchmaking.h"
#include "peerarena/reputation.h"

namespace peerarena {

class RunWriter;

struct Prompt {
  int id = 0;
  std::string text;
};

// Reads one prompt per line. Lines holding a JSON object use its "prompt"
// (or "instruction") field. Throws ConfigError on a missing or empty file.
std::vector<Prompt> LoadPrompts(const std::string& path);
std::vector<Prompt> SyntheticPrompts(int count);

// Iteration t's prompts: whole-source shuffles seeded by (seed, t, pass),
// concatenated until `count` prompts are taken. No prompt repeats within an
// iteration unless count exceeds the source size.
std::vector<Prompt> SamplePrompts(std::span<const Prompt> source, int count,
                                  std::uint64_t seed, int iteration);

struct CombatRecord {
  int iteration = 0;
  std::int64_t combat_id = 0;
  Prompt prompt;
  // Index 0 is the first-drawn model, index 1 its opponent.
  std::array<ModelId, 2> combatants;
  bool random_branch = false;
  int proximity_rank = 0;
  std::array<Generation, 2> responses;
  std::vector<ModelId> judges;
  std::vector<double> judge_weights;
  std::array<std::vector<JudgeScore>, 2> scores;
  std::array<std::optional<AggregatedScore>, 2> aggregated;
  // Empty for void combats and for dropped ties.
  std::optional<ModelId> winner;
  bool tie = false;
  bool void_combat = false;
  std::string void_reason;
  std::array<double, 2> reputation_before{};
  std::array<double, 2> reputation_after{};
};

struct PreferencePair {
  std::string prompt;
  std::string chosen;
  std::string rejected;
  double margin = 0.0;
  int iteration = 0;
  std::int64_t combat_id = 0;
  std::string chosen_label;
  std::string rejected_label;
};

// Pair for a judged combat: the higher aggregated score is chosen; exact
// ties go to the second combatant under kSecondWins and yield nothing under
// kDropPair. Void combats yield nothing.
std::optional<PreferencePair> BuildPreferencePair(
    const CombatRecord& record, TiePolicy tie_policy,
    std::span<const Agent> agents);

struct ModelSnapshot {
  std::string label;
  double reputation = 0.0;
  double deviation = 0.0;
  double judging_weight = 1.0;
  bool locked = false;
  std::optional<double> skill;
};

struct ReputationSnapshot {
  int iteration = 0;
  std::vector<ModelSnapshot> models;
};

struct ProbeResponse {
  int iteration = 0;
  Prompt prompt;
  ModelId model;
  std::string label;
  Generation response;
};

struct IterationStats {
  int iteration = 0;
  int combats = 0;
  int void_combats = 0;
  int pairs = 0;
  int ties = 0;
  int random_branch = 0;
  // proximity_ranks[r - 1] counts combats whose opponent had proximity rank r.
  std::vector<int> proximity_ranks;
  std::optional<int> newly_locked;
};

struct IterationResult {
  std::vector<CombatRecord> records;
  std::vector<PreferencePair> pairs;
  std::vector<ProbeResponse> probes;
  IterationStats stats;
};

struct RunSummary {
  std::vector<IterationStats> iterations;
  std::vector<ReputationSnapshot> history;
  // False in throughput mode, whose schedule differs from sequential play.
  bool matches_sequential_schedule = true;
};

class Arena {
 public:
  // The config must already validate.
  Arena(ArenaConfig config, std::vector<Prompt> prompts, JudgeTemplate rubric);

  // Locks the next judge for iteration t (no-op when disabled or t < 2).
  std::optional<std::size_t> BeginIteration(int iteration);

  // Plays iteration t. Expects BeginIteration(t) to have run.
  IterationResult RunIteration(int iteration);

  // Synthetic self-learning from the iteration's outcomes.
  void EndIteration(const IterationResult& result);

  // All T iterations. With a writer, each iteration is persisted before the
  // trainer hook runs. Throws TrainerFailure when the hook fails.
  RunSummary Run(RunWriter* writer);

  ReputationSnapshot Snapshot(int iteration) const;

  const ArenaConfig& config() const { return config_; }
  std::span<const Agent> agents() const { return agents_; }
  std::span<const ReputationState> reputations() const { return reputations_; }
  std::vector<ReputationState>& mutable_reputations() { return reputations_; }

 private:
  std::vector<PoolEntry> PoolSnapshot() const;
  CombatRecord PlayCombat(int iteration, std::int64_t combat_id,
                          const Prompt& prompt, const MatchSelection& match,
                          int judge_threads) const;
  void Commit(CombatRecord& record);
  std::vector<ProbeResponse> Probe(int iteration,
                                   std::span<const Prompt> prompts) const;
  void RunTrainer(int iteration, const std::string& pairs_path) const;

  ArenaConfig config_;
  std::vector<Agent> agents_;
  std::vector<Prompt> prompts_;
  JudgeTemplate rubric_;
  std::vector<ReputationState> reputations_;
  std::int64_t next_combat_id_ = 0;
};

}  // namespace peerarena

#endif  // PEERARENA_ARENA_H_
