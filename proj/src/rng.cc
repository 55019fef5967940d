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

#include "peerarena/rng.h"

namespace peerarena {
namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t MixSeed(std::uint64_t base,
                      std::initializer_list<std::uint64_t> coordinates) {
  std::uint64_t h = SplitMix64(base);
  for (std::uint64_t c : coordinates) {
    h = SplitMix64(h ^ SplitMix64(c + 0x632be59bd9b4e019ULL));
  }
  return h;
}

Rng MakeStream(std::uint64_t base, StreamKind kind,
               std::initializer_list<std::uint64_t> coordinates) {
  std::uint64_t h = MixSeed(base, {static_cast<std::uint64_t>(kind)});
  h = MixSeed(h, coordinates);
  return Rng(h);
}

}  // namespace peerarena
