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

#ifndef PEERARENA_RNG_H_
#define PEERARENA_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace peerarena {

using Rng = std::mt19937_64;

// Stream labels used when deriving independent generator seeds.
enum class StreamKind : std::uint64_t {
  kMatchmaking = 1,
  kPromptShuffle = 2,
  kGeneration = 3,
  kJudging = 4,
  kProbe = 5,
};

// Mixes a base seed with a sequence of coordinates using the splitmix64
// finalizer. Distinct coordinate tuples give statistically independent seeds.
std::uint64_t MixSeed(std::uint64_t base,
                      std::initializer_list<std::uint64_t> coordinates);

// Generator for the stream addressed by (kind, coordinates...).
Rng MakeStream(std::uint64_t base, StreamKind kind,
               std::initializer_list<std::uint64_t> coordinates);

}  // namespace peerarena

#endif  // PEERARENA_RNG_H_
