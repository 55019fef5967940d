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

// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "peerarena/agents.h"
#include "peerarena/analysis.h"
#include "peerarena/judging.h"

namespace peerarena {
namespace {

std::vector<std::string> RandomResponses(int count, int words) {
  static const char* kVocabulary[] = {"model", "answer", "reason", "step", "first",
                                      "then",  "result", "value",  "so",   "the",
                                      "a",     "proof",  "case",   "we",   "note"};
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> pick(0, std::size(kVocabulary) - 1);
  std::vector<std::string> out(count);
  for (std::string& text : out) {
    for (int w = 0; w < words; ++w) {
      if (w) text += ' ';
      text += kVocabulary[pick(rng)];
    }
  }
  return out;
}

void BM_DiversitySerial(benchmark::State& state) {
  const auto responses = RandomResponses(state.range(0), state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(DiversityReportSerial(responses));
  }
}

void BM_DiversityParallel(benchmark::State& state) {
  const auto responses = RandomResponses(state.range(0), state.range(1));
  const int threads = static_cast<int>(state.range(2));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ComputeDiversity(responses, threads));
  }
}

BENCHMARK(BM_DiversitySerial)->UseRealTime()->Args({10, 200})->Args({40, 200});
BENCHMARK(BM_DiversityParallel)->UseRealTime()
    ->Args({10, 200, 4})
    ->Args({40, 200, 4})
    ->Args({40, 200, 8});

struct Panel {
  std::vector<Agent> agents;
  std::vector<const Agent*> judges;
  Generation first, second;
  JudgeTemplate rubric = JudgeTemplate::Default();

  explicit Panel(int size) {
    for (int i = 0; i < size; ++i) {
      AgentProfile p;
      p.latent_skill = 1.0 + i;
      p.judge_noise = 0.5;
      agents.push_back(Agent{ModelId{i}, "judge-" + std::to_string(i), p});
    }
    for (const Agent& a : agents) judges.push_back(&a);
    first.text = RandomResponses(1, 200)[0];
    first.quality = 6.5;
    second.text = first.text;
    second.quality = 4.0;
  }
};

void BM_PanelSerial(benchmark::State& state) {
  Panel panel(state.range(0));
  PanelRequest request{"prompt", &panel.first, &panel.second, 11};
  for (auto _ : state) {
    benchmark::DoNotOptimize(ScorePanelSerial(request, panel.judges, panel.rubric));
  }
}

void BM_PanelParallel(benchmark::State& state) {
  Panel panel(state.range(0));
  PanelRequest request{"prompt", &panel.first, &panel.second, 11};
  const int threads = static_cast<int>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ScorePanel(request, panel.judges, panel.rubric, threads));
  }
}

BENCHMARK(BM_PanelSerial)->UseRealTime()->Arg(8)->Arg(64);
BENCHMARK(BM_PanelParallel)->UseRealTime()->Args({8, 4})->Args({64, 4});

}  // namespace
}  // namespace peerarena

BENCHMARK_MAIN();
