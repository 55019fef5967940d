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

#include "peerarena/matchmaking.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace peerarena {

void MatchParams::Validate(int pool_size) const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw ConfigError("match.alpha must be in [0, 1]");
  }
  if (top_k < 1 || top_k > pool_size - 1) {
    throw ConfigError("match.top_k must be in [1, pool_size - 1] (pool_size = " +
                      std::to_string(pool_size) + ")");
  }
}

std::vector<ModelId> ProximityOrder(std::span<const PoolEntry> snapshot,
                                    ModelId first) {
  auto self = std::find_if(snapshot.begin(), snapshot.end(),
                           [&](const PoolEntry& e) { return e.id == first; });
  if (self == snapshot.end()) {
    throw ConfigError("first model is not in the pool snapshot");
  }
  std::vector<PoolEntry> others;
  others.reserve(snapshot.size());
  for (const PoolEntry& e : snapshot) {
    if (e.id != first) others.push_back(e);
  }
  const double anchor = self->reputation;
  std::sort(others.begin(), others.end(), [&](const PoolEntry& a, const PoolEntry& b) {
    const double da = std::abs(a.reputation - anchor);
    const double db = std::abs(b.reputation - anchor);
    if (da != db) return da < db;
    return a.id < b.id;
  });
  std::vector<ModelId> ids;
  ids.reserve(others.size());
  for (const PoolEntry& e : others) ids.push_back(e.id);
  return ids;
}

MatchSelection SelectOpponent(std::span<const PoolEntry> snapshot, ModelId first,
                              const MatchParams& params, Rng& rng) {
  if (snapshot.size() < 3) {
    throw ConfigError("match-making needs a pool of at least 3 models (m >= 3)");
  }
  const std::vector<ModelId> order = ProximityOrder(snapshot, first);
  const int others = static_cast<int>(order.size());
  std::bernoulli_distribution random_branch(params.alpha);
  MatchSelection out;
  out.first = first;
  out.random_branch = random_branch(rng);
  const int span = out.random_branch ? others : std::clamp(params.top_k, 1, others);
  std::uniform_int_distribution<int> pick(0, span - 1);
  const int pos = pick(rng);
  out.opponent = order[pos];
  out.proximity_rank = pos + 1;
  return out;
}

MatchSelection SelectPair(std::span<const PoolEntry> snapshot,
                          const MatchParams& params, Rng& rng) {
  if (snapshot.size() < 3) {
    throw ConfigError("match-making needs a pool of at least 3 models (m >= 3)");
  }
  std::uniform_int_distribution<std::size_t> pick(0, snapshot.size() - 1);
  const ModelId first = snapshot[pick(rng)].id;
  return SelectOpponent(snapshot, first, params, rng);
}

}  // namespace peerarena
