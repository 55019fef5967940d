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

#ifndef PEERARENA_CLI_H_
#define PEERARENA_CLI_H_

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace peerarena {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitTrainer = 3;

enum class AnalyzeReport { kCorrelation, kDiversity, kAll };

int CmdRun(const std::string& config_path,
           const std::optional<std::string>& out_dir, std::ostream& out,
           std::ostream& err);

int CmdSimulate(const std::string& preset,
                const std::vector<std::string>& overrides,
                const std::optional<std::string>& out_dir, std::ostream& out,
                std::ostream& err);

// `performance_csv` holds "label,score" rows for pools without latent skill.
int CmdAnalyze(const std::string& run_dir, AnalyzeReport report,
               const std::optional<std::string>& csv_path,
               const std::optional<std::string>& performance_csv,
               std::ostream& out, std::ostream& err);

int CmdPrintDefaultConfig(std::ostream& out);

int RunCli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace peerarena

#endif  // PEERARENA_CLI_H_
