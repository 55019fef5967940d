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

#ifndef PEERARENA_JUDGING_H_
#define PEERARENA_JUDGING_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "peerarena/agents.h"
#include "peerarena/rng.h"
#include "peerarena/types.h"

namespace peerarena {

struct JudgeScore {
  ModelId judge;
  double score = 0.0;
  std::string raw_output;
  bool abstained = false;
  std::string reason;
};

struct AggregatedScore {
  double value = 0.0;
  int contributing_judges = 0;
  double total_weight = 0.0;
};

// Rubric text with {prompt} and {response} placeholders.
class JudgeTemplate {
 public:
  explicit JudgeTemplate(std::string text);

  static JudgeTemplate Default();
  // Throws ConfigError if the file is unreadable or lacks a placeholder.
  static JudgeTemplate FromFile(const std::string& path);

  std::string Render(std::string_view prompt, std::string_view response) const;
  const std::string& text() const { return text_; }

 private:
  std::string text_;
};

// Extracts a score from free-form judge output. The {'score': x} shape is
// tried first, then the first numeric literal. Values in [0, 10] are taken
// as-is, values in [-1, 11] are clamped, anything else is rejected.
std::optional<double> ParseScore(std::string_view raw_output);

// One judge scoring one response. Synthetic judges score the hidden quality;
// remote judges get the rendered template, with one retry when the reply has
// no parsable score.
JudgeScore ScoreResponse(std::string_view prompt, const Generation& response,
                         const Agent& judge, const JudgeTemplate& rubric,
                         Rng& rng);

struct PanelRequest {
  std::string_view prompt;
  const Generation* first = nullptr;
  const Generation* second = nullptr;
  // Each judge draws from MakeStream(stream_seed, kJudging, {judge id}).
  std::uint64_t stream_seed = 0;
};

struct PanelScores {
  std::vector<JudgeScore> first;
  std::vector<JudgeScore> second;
};

// Reference implementation: judges in order on the calling thread.
PanelScores ScorePanelSerial(const PanelRequest& request,
                             std::span<const Agent* const> judges,
                             const JudgeTemplate& rubric);

// Same result as ScorePanelSerial, with judges spread over `threads`
// OpenMP threads.
PanelScores ScorePanel(const PanelRequest& request,
                       std::span<const Agent* const> judges,
                       const JudgeTemplate& rubric, int threads);

// Weighted mean over non-abstaining judges with positive weight. Throws
// VoidJudgment when nothing contributes, std::invalid_argument on
// misaligned inputs.
AggregatedScore Aggregate(std::span<const JudgeScore> scores,
                          std::span<const double> weights);

}  // namespace peerarena

#endif  // PEERARENA_JUDGING_H_
