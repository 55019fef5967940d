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

#include "peerarena/reputation.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "peerarena/types.h"

namespace peerarena {
namespace {

void Require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

template <typename Range>
double DeviationOf(const Range& window, const ReputationParams& params) {
  const std::size_t n = std::size(window);
  if (n < 2) return params.sigma_init;
  const double mean =
      std::accumulate(std::begin(window), std::end(window), 0.0) / n;
  double sq = 0.0;
  for (double d : window) sq += (d - mean) * (d - mean);
  return std::max(std::sqrt(sq / (n - 1)), params.sigma_min);
}

}  // namespace

void ReputationParams::Validate() const {
  Require(std::isfinite(kappa) && kappa > 0, "reputation.kappa must be > 0");
  Require(epsilon > 0 && epsilon < 1, "reputation.epsilon must be in (0, 1)");
  Require(sigma_min > 0, "reputation.sigma_min must be > 0");
  Require(sigma_init > 0, "reputation.sigma_init must be > 0");
  Require(window_n >= 2, "reputation.window_n must be >= 2");
  Require(std::isfinite(gamma) && gamma >= 0,
          "reputation.gamma must be finite and >= 0");
  Require(std::isfinite(r_init), "reputation.r_init must be finite");
  Require(r_floor > 0, "reputation.r_floor must be > 0");
}

ReputationState InitialReputation(const ReputationParams& params) {
  ReputationState state;
  state.reputation = params.r_init;
  state.deviation = params.sigma_init;
  return state;
}

double Deviation(std::span<const double> delta_window,
                 const ReputationParams& params) {
  return DeviationOf(delta_window, params);
}

double Deviation(const std::deque<double>& delta_window,
                 const ReputationParams& params) {
  return DeviationOf(delta_window, params);
}

double StandardNormalCdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double CdfGap(double z) { return std::abs(std::erf(z / std::sqrt(2.0))); }

ReputationDeltas ComputeDeltas(const ReputationState& first,
                               const ReputationState& second,
                               double score_first, double score_second,
                               const ReputationParams& params) {
  for (double v : {first.reputation, second.reputation, first.deviation,
                   second.deviation, score_first, score_second}) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("reputation update received non-finite input");
    }
  }
  ReputationDeltas out;
  const double scale = std::sqrt(first.deviation * first.deviation +
                                 second.deviation * second.deviation);
  out.z = (first.reputation - second.reputation) / scale;
  // z_second = -z_first, so both sides share the same upset factor.
  const double upset = std::max(CdfGap(out.z), params.epsilon);
  const double gap = score_first - score_second;
  out.first = params.kappa * gap * std::tanh(first.deviation) * upset;
  out.second = params.kappa * -gap * std::tanh(second.deviation) * upset;
  return out;
}

std::pair<ReputationState, ReputationState> UpdateReputation(
    const ReputationState& first, const ReputationState& second,
    double score_first, double score_second, const ReputationParams& params) {
  const ReputationDeltas deltas =
      ComputeDeltas(first, second, score_first, score_second, params);
  std::pair<ReputationState, ReputationState> out{first, second};
  out.first.reputation += deltas.first;
  out.second.reputation += deltas.second;
  RecordDelta(out.first, deltas.first, params);
  RecordDelta(out.second, deltas.second, params);
  return out;
}

void RecordDelta(ReputationState& state, double delta,
                 const ReputationParams& params) {
  state.delta_window.push_back(delta);
  while (state.delta_window.size() > static_cast<std::size_t>(params.window_n)) {
    state.delta_window.pop_front();
  }
  state.deviation = Deviation(state.delta_window, params);
}

double ScheduledJudgingWeight(int iteration, double gamma) {
  return std::clamp(gamma * (iteration - 2), 0.0, 1.0);
}

std::optional<std::size_t> ApplyReweighting(std::vector<ReputationState>& pool,
                                            int iteration,
                                            const ReputationParams& params) {
  if (!params.reweighting_enabled || iteration < 2 || pool.empty()) {
    return std::nullopt;
  }
  std::vector<std::size_t> order(pool.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pool[a].reputation < pool[b].reputation;
  });
  const std::size_t n = order.size();
  const std::size_t start = std::min<std::size_t>(iteration - 2, n - 1);
  for (std::size_t step = 0; step < n; ++step) {
    // Upward from the scheduled rank first, then wrap to the lowest ranks.
    const std::size_t pos = step < n - start ? start + step : step - (n - start);
    ReputationState& candidate = pool[order[pos]];
    if (!candidate.reweight_locked) {
      candidate.judging_weight = ScheduledJudgingWeight(iteration, params.gamma);
      candidate.reweight_locked = true;
      return order[pos];
    }
  }
  return std::nullopt;
}

double EffectiveJudgeWeight(const ReputationState& state,
                            const ReputationParams& params) {
  return state.judging_weight * std::max(state.reputation, params.r_floor);
}

}  // namespace peerarena
