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

#include "peerarena/analysis.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "peerarena/types.h"

namespace peerarena {
namespace {

std::u32string DecodeUtf8(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    const unsigned char lead = s[i];
    int extra = lead < 0x80 ? 0 : (lead >> 5) == 0x6 ? 1 : (lead >> 4) == 0xE ? 2
                                 : (lead >> 3) == 0x1E ? 3 : -1;
    bool valid = extra >= 0 && i + extra < s.size();
    char32_t cp = extra > 0 ? lead & (0x3F >> extra) : lead;
    for (int k = 1; valid && k <= extra; ++k) {
      const unsigned char cont = s[i + k];
      valid = (cont & 0xC0) == 0x80;
      cp = (cp << 6) | (cont & 0x3F);
    }
    if (!valid) {
      out.push_back(lead);
      ++i;
    } else {
      out.push_back(cp);
      i += extra + 1;
    }
  }
  return out;
}

std::vector<std::string_view> Tokenize(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::unordered_map<std::string, int> NgramCounts(
    const std::vector<std::string_view>& tokens, std::size_t n) {
  std::unordered_map<std::string, int> counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key;
    for (std::size_t k = 0; k < n; ++k) {
      key += tokens[i + k];
      key += '\x1f';
    }
    ++counts[key];
  }
  return counts;
}

std::vector<int> RankOrder(std::span<const double> values) {
  std::vector<int> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return values[a] > values[b]; });
  return order;
}

DiversityReport Summarize(const std::vector<double>& edit,
                          const std::vector<double>& bleu) {
  DiversityReport out;
  out.pair_count = edit.size();
  double edit_sum = 0.0;
  double bleu_sum = 0.0;
  for (std::size_t p = 0; p < edit.size(); ++p) {
    edit_sum += edit[p];
    bleu_sum += bleu[p];
  }
  out.mean_edit_distance = edit_sum / out.pair_count;
  out.mean_bleu_distance = bleu_sum / out.pair_count;
  return out;
}

void RequirePairs(std::span<const std::string> responses) {
  if (responses.size() < 2) {
    throw std::invalid_argument("diversity needs at least two responses");
  }
}

}  // namespace

double Pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw UndefinedCorrelation("pearson needs two equal-length series of >= 2");
  }
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw UndefinedCorrelation("pearson is undefined for a constant series");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

int PositionalConcordance(std::span<const double> reputations,
                          std::span<const double> skills) {
  const std::vector<int> by_rep = RankOrder(reputations);
  const std::vector<int> by_skill = RankOrder(skills);
  int hits = 0;
  for (std::size_t i = 0; i < by_rep.size(); ++i) hits += by_rep[i] == by_skill[i];
  return hits;
}

bool TopSetContained(std::span<const double> reputations,
                     std::span<const double> skills, int top, int within) {
  const std::vector<int> by_rep = RankOrder(reputations);
  const std::vector<int> by_skill = RankOrder(skills);
  const int limit = std::min<int>(within, by_skill.size());
  for (int i = 0; i < std::min<int>(top, by_rep.size()); ++i) {
    if (std::find(by_skill.begin(), by_skill.begin() + limit, by_rep[i]) ==
        by_skill.begin() + limit) {
      return false;
    }
  }
  return true;
}

std::size_t EditDistance(std::string_view a, std::string_view b) {
  const std::u32string s = DecodeUtf8(a);
  const std::u32string t = DecodeUtf8(b);
  std::vector<std::size_t> prev(t.size() + 1), cur(t.size() + 1);
  std::iota(prev.begin(), prev.end(), 0);
  for (std::size_t i = 1; i <= s.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= t.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (s[i - 1] != t[j - 1]);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[t.size()];
}

double EditDistanceNorm(std::string_view a, std::string_view b) {
  const std::size_t longest = std::max(DecodeUtf8(a).size(), DecodeUtf8(b).size());
  if (longest == 0) return 0.0;
  return static_cast<double>(EditDistance(a, b)) / longest;
}

double Bleu(std::string_view a, std::string_view b) {
  std::vector<std::string_view> hyp = Tokenize(a);
  std::vector<std::string_view> ref = Tokenize(b);
  if (hyp.empty() || ref.empty()) return 0.0;
  if (hyp.size() > ref.size()) std::swap(hyp, ref);
  double log_sum = 0.0;
  int orders = 0;
  for (std::size_t n = 1; n <= 4; ++n) {
    if (hyp.size() < n) break;
    const auto hyp_counts = NgramCounts(hyp, n);
    const auto ref_counts = NgramCounts(ref, n);
    const double total = static_cast<double>(hyp.size() - n + 1);
    int matched = 0;
    for (const auto& [gram, count] : hyp_counts) {
      auto it = ref_counts.find(gram);
      if (it != ref_counts.end()) matched += std::min(count, it->second);
    }
    const double precision = matched > 0 ? matched / total : 1.0 / (2.0 * total);
    log_sum += std::log(precision);
    ++orders;
  }
  const double c = static_cast<double>(hyp.size());
  const double r = static_cast<double>(ref.size());
  const double brevity = c < r ? std::exp(1.0 - r / c) : 1.0;
  return brevity * std::exp(log_sum / orders);
}

double BleuDistance(std::string_view a, std::string_view b) {
  return std::clamp(1.0 - Bleu(a, b), 0.0, 1.0);
}

DiversityReport DiversityReportSerial(std::span<const std::string> responses) {
  RequirePairs(responses);
  std::vector<double> edit, bleu;
  for (std::size_t i = 0; i < responses.size(); ++i) {
    for (std::size_t j = i + 1; j < responses.size(); ++j) {
      edit.push_back(EditDistanceNorm(responses[i], responses[j]));
      bleu.push_back(BleuDistance(responses[i], responses[j]));
    }
  }
  return Summarize(edit, bleu);
}

DiversityReport ComputeDiversity(std::span<const std::string> responses,
                                 int threads) {
  RequirePairs(responses);
  const std::size_t n = responses.size();
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  std::vector<double> edit(pairs.size()), bleu(pairs.size());
  const long count = static_cast<long>(pairs.size());
#pragma omp parallel for num_threads(threads) schedule(dynamic, 4) if (threads > 1)
  for (long p = 0; p < count; ++p) {
    const auto [i, j] = pairs[p];
    edit[p] = EditDistanceNorm(responses[i], responses[j]);
    bleu[p] = BleuDistance(responses[i], responses[j]);
  }
  return Summarize(edit, bleu);
}

}  // namespace peerarena
