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

// Reputation bookkeeping for pool members: the Elo-style pairwise update,
// the sliding-window deviation that moderates it, and the judging-weight
// schedule that progressively discounts low-reputation judges.

#ifndef PEERARENA_REPUTATION_H_
#define PEERARENA_REPUTATION_H_

#include <cstddef>
#include <deque>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace peerarena {

struct ReputationParams {
  double kappa = 1.0;
  // Lower bound on the upset factor, so even evenly matched combats move.
  double epsilon = 0.05;
  double sigma_min = 0.25;
  // Deviation reported while fewer than two deltas are on record.
  double sigma_init = 1.0;
  int window_n = 10;
  double gamma = 0.1;
  bool reweighting_enabled = true;
  double r_init = 1.0;
  // Reputation floor used only when reputation acts as a judging weight.
  double r_floor = 0.01;

  // Throws ConfigError naming the violated constraint.
  void Validate() const;
};

struct ReputationState {
  double reputation = 1.0;
  // Most recent per-combat deltas, oldest first; at most window_n entries.
  std::deque<double> delta_window;
  double deviation = 1.0;
  double judging_weight = 1.0;
  bool reweight_locked = false;
};

ReputationState InitialReputation(const ReputationParams& params);

// Sample standard deviation (N - 1 denominator) of the window, floored at
// sigma_min. Windows with fewer than two entries yield sigma_init.
double Deviation(std::span<const double> delta_window,
                 const ReputationParams& params);
double Deviation(const std::deque<double>& delta_window,
                 const ReputationParams& params);

double StandardNormalCdf(double z);

// |Phi(z) - Phi(-z)|, evaluated as |erf(z / sqrt(2))| to avoid cancellation.
double CdfGap(double z);

struct ReputationDeltas {
  double first = 0.0;
  double second = 0.0;
  // Normalized reputation gap of the first model; the second sees -z.
  double z = 0.0;
};

// Reputation changes for a combat between `first` and `second` whose
// aggregated scores are `score_first` and `score_second`. Both deltas are
// computed from the pre-combat states. Throws std::invalid_argument on
// non-finite input.
ReputationDeltas ComputeDeltas(const ReputationState& first,
                               const ReputationState& second,
                               double score_first, double score_second,
                               const ReputationParams& params);

// Applies ComputeDeltas and records each delta in its model's window.
std::pair<ReputationState, ReputationState> UpdateReputation(
    const ReputationState& first, const ReputationState& second,
    double score_first, double score_second, const ReputationParams& params);

// Appends a delta, evicting the oldest beyond window_n, and refreshes the
// cached deviation.
void RecordDelta(ReputationState& state, double delta,
                 const ReputationParams& params);

// Judging weight assigned to the model locked at iteration t: gamma * (t - 2)
// clamped to [0, 1].
double ScheduledJudgingWeight(int iteration, double gamma);

// Locks one more judge at the start of iteration t >= 2. The candidate is the
// model at the (t - 1)-th lowest reputation (ties by ascending index); if it
// is already locked, the next unlocked model upward in the ranking is taken,
// wrapping to the lowest unlocked one. Returns the index of the newly locked
// model, or nullopt when nothing changed.
std::optional<std::size_t> ApplyReweighting(std::vector<ReputationState>& pool,
                                            int iteration,
                                            const ReputationParams& params);

// omega * max(R, r_floor).
double EffectiveJudgeWeight(const ReputationState& state,
                            const ReputationParams& params);

}  // namespace peerarena

#endif  // PEERARENA_REPUTATION_H_
