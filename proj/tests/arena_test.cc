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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "peerarena/analysis.h"
#include "peerarena/run_io.h"
#include "peerarena/types.h"
#include "test_server.h"

namespace peerarena {
namespace {

namespace fs = std::filesystem;

fs::path TempDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("peerarena_arena_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

ArenaConfig Ladder(int m, int iterations, int prompts) {
  ArenaConfig c;
  c.pool_size = m;
  c.ladder = LadderSpec{};
  c.iterations = iterations;
  c.prompts_per_iteration = prompts;
  c.synthetic_prompts = std::max(prompts, 10);
  c.match.top_k = std::min(5, m - 1);
  c.seed = 77;
  return c;
}

Arena MakeArena(const ArenaConfig& c) {
  c.Validate();
  return Arena(c, SyntheticPrompts(c.synthetic_prompts), JudgeTemplate::Default());
}

CombatRecord Judged(double s0, double s1) {
  CombatRecord r;
  r.prompt = {0, "p"};
  r.combatants = {ModelId{0}, ModelId{1}};
  r.responses[0].text = "first";
  r.responses[1].text = "second";
  r.aggregated[0] = AggregatedScore{s0, 1, 1.0};
  r.aggregated[1] = AggregatedScore{s1, 1, 1.0};
  return r;
}

std::vector<Agent> TwoLabels() {
  return {Agent{ModelId{0}, "i", AgentProfile{}}, Agent{ModelId{1}, "j", AgentProfile{}}};
}

TEST(PreferencePairTest, HigherScoreChosen) {
  const auto agents = TwoLabels();
  const auto p = BuildPreferencePair(Judged(7.2, 6.9), TiePolicy::kSecondWins, agents);
  ASSERT_TRUE(p.has_value());
  EXPECT_EQ(p->chosen, "first");
  EXPECT_EQ(p->rejected, "second");
  EXPECT_EQ(p->chosen_label, "i");
  EXPECT_NEAR(p->margin, 0.3, 1e-12);
  const auto q = BuildPreferencePair(Judged(3.0, 4.5), TiePolicy::kDropPair, agents);
  ASSERT_TRUE(q.has_value());
  EXPECT_EQ(q->chosen, "second");
}

TEST(PreferencePairTest, TiePolicies) {
  const auto agents = TwoLabels();
  const auto p = BuildPreferencePair(Judged(6.0, 6.0), TiePolicy::kSecondWins, agents);
  ASSERT_TRUE(p.has_value());
  EXPECT_EQ(p->chosen, "second");
  EXPECT_EQ(p->margin, 0.0);
  EXPECT_FALSE(
      BuildPreferencePair(Judged(6.0, 6.0), TiePolicy::kDropPair, agents).has_value());
}

TEST(PreferencePairTest, VoidCombatYieldsNothing) {
  CombatRecord r = Judged(6, 5);
  r.void_combat = true;
  EXPECT_FALSE(BuildPreferencePair(r, TiePolicy::kSecondWins, TwoLabels()));
}

TEST(PromptsTest, SamplingIsWithoutReplacementAndReshuffled) {
  const auto source = SyntheticPrompts(50);
  const auto first = SamplePrompts(source, 50, 9, 1);
  const auto second = SamplePrompts(source, 50, 9, 2);
  std::set<int> ids;
  for (const Prompt& p : first) ids.insert(p.id);
  EXPECT_EQ(ids.size(), 50u);
  bool differs = false;
  for (int i = 0; i < 50; ++i) differs |= first[i].id != second[i].id;
  EXPECT_TRUE(differs);
  const auto again = SamplePrompts(source, 50, 9, 1);
  for (int i = 0; i < 50; ++i) EXPECT_EQ(first[i].id, again[i].id);
  // More prompts than the source: each full pass is a permutation.
  const auto many = SamplePrompts(source, 120, 9, 1);
  ASSERT_EQ(many.size(), 120u);
  std::set<int> pass2;
  for (int i = 50; i < 100; ++i) pass2.insert(many[i].id);
  EXPECT_EQ(pass2.size(), 50u);
}

TEST(PromptsTest, LoadsPlainAndJsonLines) {
  const fs::path dir = TempDir("prompts");
  fs::create_directories(dir);
  std::ofstream(dir / "p.txt") << "plain prompt\n\n{\"prompt\": \"json prompt\"}\n"
                               << "{\"instruction\": \"alt key\"}\r\n";
  const auto prompts = LoadPrompts((dir / "p.txt").string());
  ASSERT_EQ(prompts.size(), 3u);
  EXPECT_EQ(prompts[0].text, "plain prompt");
  EXPECT_EQ(prompts[1].text, "json prompt");
  EXPECT_EQ(prompts[2].text, "alt key");
  EXPECT_EQ(prompts[2].id, 2);
  std::ofstream(dir / "empty.txt") << "\n\n";
  EXPECT_THROW(LoadPrompts((dir / "empty.txt").string()), ConfigError);
  EXPECT_THROW(LoadPrompts((dir / "none.txt").string()), ConfigError);
}

TEST(ArenaTest, ThreeAgentsOnePrompt) {
  ArenaConfig c = Ladder(3, 1, 1);
  c.match.top_k = 1;
  Arena arena = MakeArena(c);
  arena.BeginIteration(1);
  const IterationResult r = arena.RunIteration(1);
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.records[0].judges.size(), 1u);
  EXPECT_LE(r.pairs.size(), 1u);
}

TEST(ArenaTest, TenAgentsThousandPromptsEightJudgesEach) {
  Arena arena = MakeArena(Ladder(10, 1, 1000));
  arena.BeginIteration(1);
  const IterationResult r = arena.RunIteration(1);
  ASSERT_EQ(r.records.size(), 1000u);
  for (const CombatRecord& rec : r.records) {
    EXPECT_EQ(rec.judges.size(), 8u);
    for (ModelId j : rec.judges) {
      EXPECT_NE(j, rec.combatants[0]);
      EXPECT_NE(j, rec.combatants[1]);
    }
    EXPECT_NE(rec.combatants[0], rec.combatants[1]);
  }
}

TEST(ArenaTest, ConservationAndMarginInvariants) {
  for (TiePolicy policy : {TiePolicy::kSecondWins, TiePolicy::kDropPair}) {
    ArenaConfig c = Ladder(5, 3, 150);
    c.tie_policy = policy;
    // Skills near the ceiling make clamped qualities of 10 common, and with
    // noiseless judges those combats tie exactly.
    c.ladder->generation_noise = 2;
    c.ladder->judge_noise = 0;
    c.ladder->min_skill = 9;
    c.ladder->max_skill = 10;
    Arena arena = MakeArena(c);
    int ties = 0;
    for (int t = 1; t <= 3; ++t) {
      arena.BeginIteration(t);
      const IterationResult r = arena.RunIteration(t);
      EXPECT_EQ(r.records.size(), 150u);
      std::size_t expected_pairs = 0;
      for (const CombatRecord& rec : r.records) {
        if (rec.void_combat) continue;
        if (rec.tie) ++ties;
        if (!(rec.tie && policy == TiePolicy::kDropPair)) ++expected_pairs;
      }
      EXPECT_EQ(r.pairs.size(), expected_pairs);
      std::size_t k = 0;
      for (const CombatRecord& rec : r.records) {
        auto pair = BuildPreferencePair(rec, policy, arena.agents());
        if (!pair) continue;
        const PreferencePair& p = r.pairs[k++];
        EXPECT_NEAR(p.margin,
                    std::abs(rec.aggregated[0]->value - rec.aggregated[1]->value),
                    1e-12);
        if (policy == TiePolicy::kDropPair) EXPECT_GT(p.margin, 0.0);
        if (rec.tie) {
          EXPECT_EQ(p.chosen_label, arena.agents()[rec.combatants[1].value].label);
        }
      }
    }
    EXPECT_GT(ties, 0);
  }
}

TEST(ArenaTest, ZeroWeightJudgeVoidsCombat) {
  // With three models the lone judge is silenced whenever it is the model
  // locked at omega = 0 in iteration 2.
  ArenaConfig c = Ladder(3, 2, 60);
  c.match.top_k = 1;
  Arena arena = MakeArena(c);
  arena.BeginIteration(1);
  arena.RunIteration(1);
  const auto locked = arena.BeginIteration(2);
  ASSERT_TRUE(locked.has_value());
  const IterationResult r = arena.RunIteration(2);
  int voids = 0;
  for (const CombatRecord& rec : r.records) {
    const bool silenced_judge = rec.judges[0].value == static_cast<int>(*locked);
    EXPECT_EQ(rec.void_combat, silenced_judge);
    if (rec.void_combat) {
      ++voids;
      EXPECT_EQ(rec.reputation_before, rec.reputation_after);
      EXPECT_FALSE(rec.winner.has_value());
    }
  }
  EXPECT_GT(voids, 0);
  EXPECT_EQ(r.stats.void_combats, voids);
  EXPECT_EQ(r.pairs.size(), r.records.size() - voids);
}

TEST(ArenaTest, RunWritesDirectoryLayout) {
  const fs::path dir = TempDir("layout");
  Arena arena = MakeArena(Ladder(10, 8, 20));
  RunWriter writer(dir);
  const RunSummary summary = arena.Run(&writer);
  for (int t = 1; t <= 8; ++t) {
    EXPECT_TRUE(fs::exists(PairsPath(dir, t)));
    EXPECT_EQ(ReadJsonl(ResponsesPath(dir, t)).size(), 10u);
  }
  EXPECT_FALSE(fs::exists(PairsPath(dir, 9)));
  const auto history = ReadJsonl(dir / "reputation_history.jsonl");
  ASSERT_EQ(history.size(), 9u);
  for (const auto& row : history) EXPECT_EQ(row["models"].size(), 10u);
  EXPECT_EQ(summary.history.size(), 9u);
  EXPECT_EQ(ReadJsonl(dir / "combats.jsonl").size(), 160u);
  const auto pair = ReadJsonl(PairsPath(dir, 1)).at(0);
  for (const char* key : {"prompt", "chosen", "rejected", "meta"}) {
    EXPECT_TRUE(pair.contains(key)) << key;
  }
  for (const char* key : {"iteration", "combat_id", "margin", "chosen_model",
                          "rejected_model"}) {
    EXPECT_TRUE(pair["meta"].contains(key)) << key;
  }
  const auto manifest = nlohmann::json::parse(Slurp(dir / "manifest.json"));
  EXPECT_EQ(manifest["config_digest"], Sha256Hex(Slurp(dir / "config.json")));
  EXPECT_EQ(manifest["status"], "completed");
  EXPECT_EQ(manifest["iterations"].size(), 8u);
}

TEST(ArenaTest, ReweightingLocksOneModelPerIteration) {
  Arena arena = MakeArena(Ladder(10, 8, 50));
  const RunSummary summary = arena.Run(nullptr);
  std::vector<double> locked_at(10, -1.0);
  for (const ReputationSnapshot& s : summary.history) {
    int locked = 0;
    for (std::size_t i = 0; i < s.models.size(); ++i) {
      if (!s.models[i].locked) continue;
      ++locked;
      if (locked_at[i] < 0) {
        locked_at[i] = s.models[i].judging_weight;
        EXPECT_DOUBLE_EQ(s.models[i].judging_weight,
                         ScheduledJudgingWeight(s.iteration, 0.1));
      }
      EXPECT_EQ(s.models[i].judging_weight, locked_at[i]);
    }
    EXPECT_EQ(locked, std::max(s.iteration - 1, 0));
  }
}

TEST(ArenaTest, IdenticalSeedsGiveIdenticalBytes) {
  const fs::path a = TempDir("det_a"), b = TempDir("det_b"), c = TempDir("det_c");
  ArenaConfig config = Ladder(10, 3, 60);
  {
    Arena arena = MakeArena(config);
    RunWriter w(a);
    arena.Run(&w);
  }
  {
    Arena arena = MakeArena(config);
    RunWriter w(b);
    arena.Run(&w);
  }
  config.parallelism = 4;  // judge fan-out only; schedule unchanged
  {
    Arena arena = MakeArena(config);
    RunWriter w(c);
    arena.Run(&w);
  }
  for (const std::string f : {"combats.jsonl", "pairs_iter_1.jsonl",
                              "pairs_iter_3.jsonl", "reputation_history.jsonl"}) {
    EXPECT_EQ(Slurp(a / f), Slurp(b / f)) << f;
    EXPECT_EQ(Slurp(a / f), Slurp(c / f)) << f;
  }
}

TEST(ArenaTest, ThroughputModeIsDeterministicAndFlagged) {
  ArenaConfig config = Ladder(8, 2, 40);
  config.throughput_mode = true;
  config.parallelism = 4;
  const fs::path a = TempDir("tp_a"), b = TempDir("tp_b");
  RunSummary sa, sb;
  {
    Arena arena = MakeArena(config);
    RunWriter w(a);
    sa = arena.Run(&w);
  }
  {
    Arena arena = MakeArena(config);
    RunWriter w(b);
    sb = arena.Run(&w);
  }
  EXPECT_FALSE(sa.matches_sequential_schedule);
  EXPECT_EQ(Slurp(a / "combats.jsonl"), Slurp(b / "combats.jsonl"));
  EXPECT_EQ(ReadJsonl(a / "combats.jsonl").size(), 80u);

  // A batch of one is the sequential schedule.
  ArenaConfig single = config;
  single.parallelism = 1;
  ArenaConfig sequential = single;
  sequential.throughput_mode = false;
  const fs::path c = TempDir("tp_c"), d = TempDir("tp_d");
  {
    Arena arena = MakeArena(single);
    RunWriter w(c);
    EXPECT_TRUE(arena.Run(&w).matches_sequential_schedule);
  }
  {
    Arena arena = MakeArena(sequential);
    RunWriter w(d);
    arena.Run(&w);
  }
  EXPECT_EQ(Slurp(c / "combats.jsonl"), Slurp(d / "combats.jsonl"));
}

TEST(ArenaTest, LadderReputationRecoversSkillOrder) {
  ArenaConfig c = Ladder(10, 8, 200);
  Arena arena = MakeArena(c);
  const RunSummary summary = arena.Run(nullptr);
  std::vector<double> reps, skills;
  for (const ModelSnapshot& m : summary.history.back().models) {
    reps.push_back(m.reputation);
    skills.push_back(*m.skill);
  }
  EXPECT_GE(PositionalConcordance(reps, skills), 8);
  EXPECT_GE(Pearson(reps, skills), 0.8);
}

TEST(ArenaTest, SyntheticLearningMovesSkills) {
  ArenaConfig c = Ladder(5, 3, 100);
  c.ladder->learning_rate = 1.0;
  Arena arena = MakeArena(c);
  const RunSummary summary = arena.Run(nullptr);
  const auto& first = summary.history.front().models;
  const auto& last = summary.history.back().models;
  EXPECT_GT(*last.back().skill, *first.back().skill - 1e-12);
  EXPECT_LT(*last.front().skill, *first.front().skill);
}

TEST(TrainerHookTest, InvokedOncePerModelWithPairsPath) {
  const fs::path dir = TempDir("trainer_ok");
  fs::create_directories(dir);
  const fs::path log = dir / "calls.log";
  ArenaConfig c = Ladder(4, 2, 10);
  c.match.top_k = 3;
  c.trainer_command = "printf '%s %s %s %s\\n' >> '" + log.string() + "'";
  Arena arena = MakeArena(c);
  RunWriter w(dir / "run");
  arena.Run(&w);
  std::ifstream in(log);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  ASSERT_EQ(lines.size(), 8u);
  EXPECT_EQ(lines[0], "--pairs " + PairsPath(dir / "run", 1).string() +
                          " --model model-01");
  EXPECT_EQ(lines[7], "--pairs " + PairsPath(dir / "run", 2).string() +
                          " --model model-04");
}

TEST(TrainerHookTest, FailureAbortsWithIterationOnDisk) {
  const fs::path dir = TempDir("trainer_fail");
  ArenaConfig c = Ladder(4, 3, 10);
  c.match.top_k = 3;
  c.trainer_command = "/bin/false";
  Arena arena = MakeArena(c);
  RunWriter w(dir);
  try {
    arena.Run(&w);
    FAIL() << "expected TrainerFailure";
  } catch (const TrainerFailure& e) {
    EXPECT_EQ(e.iteration(), 1);
    EXPECT_EQ(e.exit_code(), 1);
  }
  EXPECT_TRUE(fs::exists(PairsPath(dir, 1)));
  EXPECT_FALSE(fs::exists(PairsPath(dir, 2)));
  EXPECT_EQ(ReadJsonl(dir / "reputation_history.jsonl").size(), 2u);
  const auto manifest = nlohmann::json::parse(Slurp(dir / "manifest.json"));
  EXPECT_EQ(manifest["status"], "trainer_failed");
}

TEST(RemoteArenaTest, FullCombatOverTheWire) {
  // Answers encode the model name; judges prefer answers from "strong".
  testing::ChatServer server([](const std::string& user) -> std::string {
    if (user.find("Rate the response") != std::string::npos) {
      return user.find("answer by strong") != std::string::npos ? "{'score': 9}"
                                                               : "{'score': 3}";
    }
    return "answer";
  });
  // The generation reply cannot see the model name, so the strong model gets
  // its own server.
  testing::ChatServer strong([](const std::string& user) -> std::string {
    if (user.find("Rate the response") != std::string::npos) return "{'score': 5}";
    return "answer by strong";
  });
  ArenaConfig c;
  c.ladder.reset();
  c.iterations = 1;
  c.prompts_per_iteration = 12;
  c.synthetic_prompts = 12;
  c.match.top_k = 2;
  c.diversity_probes = 1;
  for (int i = 0; i < 4; ++i) {
    EndpointDescriptor e;
    e.base_url = i == 0 ? strong.base_url() : server.base_url();
    e.model = "m" + std::to_string(i);
    e.timeout_seconds = 5;
    e.max_retries = 0;
    c.agents.push_back(Agent{ModelId{i}, i == 0 ? "strong" : "weak" + std::to_string(i), e});
  }
  c.pool_size = 4;
  Arena arena = MakeArena(c);
  arena.BeginIteration(1);
  const IterationResult r = arena.RunIteration(1);
  ASSERT_EQ(r.records.size(), 12u);
  for (const CombatRecord& rec : r.records) {
    ASSERT_FALSE(rec.void_combat) << rec.void_reason;
    EXPECT_EQ(rec.judges.size(), 2u);
    const bool strong_fought = rec.combatants[0].value == 0 || rec.combatants[1].value == 0;
    if (strong_fought) {
      EXPECT_EQ(rec.winner->value, 0);
    } else {
      EXPECT_TRUE(rec.tie);
    }
  }
  EXPECT_EQ(r.probes.size(), 4u);
  EXPECT_GT(arena.reputations()[0].reputation, arena.reputations()[1].reputation);
}

}  // namespace
}  // namespace peerarena
