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

// Run-directory layout:
//   config.json               the resolved configuration
//   manifest.json             digest, seed, timestamps, per-iteration rows
//   combats.jsonl             one CombatRecord per line, all iterations
//   pairs_iter_<t>.jsonl      preference pairs of iteration t
//   responses_iter_<t>.jsonl  probe answers of every model (diversity)
//   reputation_history.jsonl  one snapshot per iteration, including t = 0

#ifndef PEERARENA_RUN_IO_H_
#define PEERARENA_RUN_IO_H_

#include <chrono>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "peerarena/arena.h"

namespace peerarena {

nlohmann::json ToJson(const CombatRecord& record, std::span<const Agent> agents);
nlohmann::json ToJson(const PreferencePair& pair);
nlohmann::json ToJson(const ReputationSnapshot& snapshot);
nlohmann::json ToJson(const ProbeResponse& probe);
ReputationSnapshot SnapshotFromJson(const nlohmann::json& j);

std::vector<nlohmann::json> ReadJsonl(const std::filesystem::path& path);
std::string Sha256Hex(std::string_view data);
std::filesystem::path PairsPath(const std::filesystem::path& dir, int iteration);
std::filesystem::path ResponsesPath(const std::filesystem::path& dir,
                                    int iteration);

class RunWriter {
 public:
  // Creates the directory and truncates any files of a previous run.
  explicit RunWriter(std::filesystem::path dir);

  void WriteConfig(const ArenaConfig& config);
  void AppendCombats(std::span<const CombatRecord> records,
                     std::span<const Agent> agents);
  std::filesystem::path WritePairs(int iteration,
                                   std::span<const PreferencePair> pairs);
  void WriteProbes(int iteration, std::span<const ProbeResponse> probes);
  void AppendSnapshot(const ReputationSnapshot& snapshot);
  void WriteManifest(const RunSummary& summary, std::string_view status);

  const std::filesystem::path& dir() const { return dir_; }
  const std::string& config_digest() const { return config_digest_; }

 private:
  void Append(const std::string& file, const std::string& text);

  std::filesystem::path dir_;
  std::string config_digest_;
  std::uint64_t seed_ = 0;
  std::string started_at_;
};

}  // namespace peerarena

#endif  // PEERARENA_RUN_IO_H_
