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

#ifndef PEERARENA_ANALYSIS_H_
#define PEERARENA_ANALYSIS_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>

namespace peerarena {

// Pearson correlation coefficient. Throws UndefinedCorrelation for unequal
// lengths, fewer than two points, or a constant series.
double Pearson(std::span<const double> xs, std::span<const double> ys);

// Number of positions i at which the i-th highest reputation also has the
// i-th highest skill (ties by index).
int PositionalConcordance(std::span<const double> reputations,
                          std::span<const double> skills);

// Whether the top `top` models by reputation all lie in the top `within` by
// skill.
bool TopSetContained(std::span<const double> reputations,
                     std::span<const double> skills, int top, int within);

// Levenshtein distance over Unicode code points (UTF-8 input; invalid bytes
// count as single characters).
std::size_t EditDistance(std::string_view a, std::string_view b);

// EditDistance / max(|a|, |b|) in code points; 0 when both are empty.
double EditDistanceNorm(std::string_view a, std::string_view b);

// Sentence BLEU with uniform weights over 1- to 4-gram precisions on
// whitespace tokens. The shorter text is the hypothesis and the longer the
// reference, which makes the score symmetric. Zero precisions are replaced
// by 1 / (2 * hypothesis n-gram count); orders the hypothesis is too short to
// contain are left out and the weights renormalized. Empty tokenization gives
// 0.
double Bleu(std::string_view a, std::string_view b);

// 1 - Bleu, in [0, 1].
double BleuDistance(std::string_view a, std::string_view b);

struct DiversityReport {
  double mean_edit_distance = 0.0;
  double mean_bleu_distance = 0.0;
  std::size_t pair_count = 0;
};

// Means over all unordered pairs. Throws std::invalid_argument for fewer
// than two responses.
DiversityReport DiversityReportSerial(std::span<const std::string> responses);

// Pair distances computed on `threads` OpenMP threads, then summed in pair
// order, so the result is bit-identical to DiversityReportSerial.
DiversityReport ComputeDiversity(std::span<const std::string> responses,
                                 int threads);

}  // namespace peerarena

#endif  // PEERARENA_ANALYSIS_H_
