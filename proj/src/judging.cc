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

#include "peerarena/judging.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <regex>
#include <sstream>
#include <stdexcept>

namespace peerarena {
namespace {

constexpr std::string_view kPromptSlot = "{prompt}";
constexpr std::string_view kResponseSlot = "{response}";

constexpr char kDefaultRubric[] =
    "You are reviewing an answer written by another assistant.\n"
    "Judge how well the response fulfils the instruction: correctness, "
    "helpfulness, completeness and clarity.\n\n"
    "Instruction:\n{prompt}\n\n"
    "Response:\n{response}\n\n"
    "Rate the response on a scale of 0 to 10, where 10 is best.\n"
    "Please output in the format: {'score': score}";

std::optional<double> InRange(double value) {
  if (!std::isfinite(value) || value < -1.0 || value > 11.0) return std::nullopt;
  return std::clamp(value, 0.0, 10.0);
}

JudgeScore Abstain(ModelId judge, std::string raw, std::string reason) {
  JudgeScore out;
  out.judge = judge;
  out.abstained = true;
  out.raw_output = std::move(raw);
  out.reason = std::move(reason);
  return out;
}

JudgeScore ScoreRemote(std::string_view prompt, const Generation& response,
                       const Agent& judge, const JudgeTemplate& rubric) {
  const std::string message = rubric.Render(prompt, response.text);
  std::string last_raw;
  for (int attempt = 0; attempt < 2; ++attempt) {
    ChatResult chat = ChatCompletion(judge.endpoint(), message);
    if (!chat.content) {
      return Abstain(judge.id, "", "transport: " + chat.error);
    }
    if (auto score = ParseScore(*chat.content)) {
      JudgeScore out;
      out.judge = judge.id;
      out.score = *score;
      out.raw_output = std::move(*chat.content);
      return out;
    }
    last_raw = std::move(*chat.content);
  }
  return Abstain(judge.id, std::move(last_raw), "no parsable score");
}

void ScoreOne(const PanelRequest& request, const Agent& judge,
              const JudgeTemplate& rubric, JudgeScore& first, JudgeScore& second) {
  Rng rng = MakeStream(request.stream_seed, StreamKind::kJudging,
                       {static_cast<std::uint64_t>(judge.id.value)});
  first = ScoreResponse(request.prompt, *request.first, judge, rubric, rng);
  second = ScoreResponse(request.prompt, *request.second, judge, rubric, rng);
}

}  // namespace

JudgeTemplate::JudgeTemplate(std::string text) : text_(std::move(text)) {}

JudgeTemplate JudgeTemplate::Default() { return JudgeTemplate(kDefaultRubric); }

JudgeTemplate JudgeTemplate::FromFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read judge template: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::string text = buffer.str();
  if (text.find(kPromptSlot) == std::string::npos ||
      text.find(kResponseSlot) == std::string::npos) {
    throw ConfigError("judge template must contain {prompt} and {response}: " +
                      path);
  }
  return JudgeTemplate(std::move(text));
}

std::string JudgeTemplate::Render(std::string_view prompt,
                                  std::string_view response) const {
  std::string out;
  out.reserve(text_.size() + prompt.size() + response.size());
  std::string_view rest = text_;
  while (!rest.empty()) {
    if (rest.starts_with(kPromptSlot)) {
      out += prompt;
      rest.remove_prefix(kPromptSlot.size());
    } else if (rest.starts_with(kResponseSlot)) {
      out += response;
      rest.remove_prefix(kResponseSlot.size());
    } else {
      out += rest.front();
      rest.remove_prefix(1);
    }
  }
  return out;
}

std::optional<double> ParseScore(std::string_view raw_output) {
  static const std::regex keyed(
      R"(['"]?score['"]?\s*[:=]\s*['"]?(-?\d+(?:\.\d+)?))", std::regex::icase);
  static const std::regex numeric(R"((?:^|[^\d.])(-?\d+(?:\.\d+)?))");
  const std::string text(raw_output);
  std::smatch match;
  if (std::regex_search(text, match, keyed) ||
      std::regex_search(text, match, numeric)) {
    return InRange(std::stod(match[1].str()));
  }
  return std::nullopt;
}

JudgeScore ScoreResponse(std::string_view prompt, const Generation& response,
                         const Agent& judge, const JudgeTemplate& rubric,
                         Rng& rng) {
  if (!response.ok) return Abstain(judge.id, "", "response unavailable");
  if (judge.synthetic()) {
    if (!response.quality) {
      return Abstain(judge.id, "", "synthetic judge needs a synthetic response");
    }
    JudgeScore out;
    out.judge = judge.id;
    out.score = JudgeSynthetic(judge.profile(), *response.quality, rng);
    return out;
  }
  return ScoreRemote(prompt, response, judge, rubric);
}

PanelScores ScorePanelSerial(const PanelRequest& request,
                             std::span<const Agent* const> judges,
                             const JudgeTemplate& rubric) {
  PanelScores out;
  out.first.resize(judges.size());
  out.second.resize(judges.size());
  for (std::size_t k = 0; k < judges.size(); ++k) {
    ScoreOne(request, *judges[k], rubric, out.first[k], out.second[k]);
  }
  return out;
}

PanelScores ScorePanel(const PanelRequest& request,
                       std::span<const Agent* const> judges,
                       const JudgeTemplate& rubric, int threads) {
  PanelScores out;
  const int n = static_cast<int>(judges.size());
  out.first.resize(n);
  out.second.resize(n);
#pragma omp parallel for num_threads(threads) schedule(dynamic) if (threads > 1)
  for (int k = 0; k < n; ++k) {
    ScoreOne(request, *judges[k], rubric, out.first[k], out.second[k]);
  }
  return out;
}

AggregatedScore Aggregate(std::span<const JudgeScore> scores,
                          std::span<const double> weights) {
  if (scores.size() != weights.size()) {
    throw std::invalid_argument("scores and weights must be aligned");
  }
  AggregatedScore out;
  double weighted = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t k = 0; k < scores.size(); ++k) {
    if (scores[k].abstained || !(weights[k] > 0.0)) continue;
    weighted += weights[k] * scores[k].score;
    out.total_weight += weights[k];
    ++out.contributing_judges;
    lo = std::min(lo, scores[k].score);
    hi = std::max(hi, scores[k].score);
  }
  if (out.contributing_judges == 0 || !(out.total_weight > 0.0)) {
    throw VoidJudgment("no judge contributed a weighted score");
  }
  // Rounding can leave the quotient one ulp outside the contributing range.
  out.value = std::clamp(weighted / out.total_weight, lo, hi);
  return out;
}

}  // namespace peerarena
