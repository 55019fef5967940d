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

#ifndef PEERARENA_MATCHMAKING_H_
#define PEERARENA_MATCHMAKING_H_

#include <span>
#include <vector>

#include "peerarena/rng.h"
#include "peerarena/types.h"

namespace peerarena {

struct MatchParams {
  // Probability that the opponent is drawn uniformly from the rest of the pool.
  double alpha = 0.6;
  // Size of the reputation-proximity candidate set.
  int top_k = 5;

  void Validate(int pool_size) const;
};

struct PoolEntry {
  ModelId id;
  double reputation = 0.0;
};

struct MatchSelection {
  ModelId first;
  ModelId opponent;
  // True when the opponent came from the uniform branch.
  bool random_branch = false;
  // 1-based position of the opponent in first's proximity ordering.
  int proximity_rank = 0;
};

// Other pool members ordered by |R - R_first|, ties by ascending id.
std::vector<ModelId> ProximityOrder(std::span<const PoolEntry> snapshot,
                                    ModelId first);

// Opponent for a fixed first model. Throws ConfigError when the snapshot has
// fewer than three members or `first` is not among them.
MatchSelection SelectOpponent(std::span<const PoolEntry> snapshot, ModelId first,
                              const MatchParams& params, Rng& rng);

// First model uniform over the snapshot, then SelectOpponent.
MatchSelection SelectPair(std::span<const PoolEntry> snapshot,
                          const MatchParams& params, Rng& rng);

}  // namespace peerarena

#endif  // PEERARENA_MATCHMAKING_H_
