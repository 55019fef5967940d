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

#include "peerarena/run_io.h"

#include <openssl/evp.h>

#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "peerarena/types.h"

namespace peerarena {
namespace {

using json = nlohmann::json;

const char kCombats[] = "combats.jsonl";
const char kHistory[] = "reputation_history.jsonl";

std::string UtcNow() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

void WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

json ScoresJson(const std::vector<JudgeScore>& scores) {
  json list = json::array();
  for (const JudgeScore& s : scores) {
    json item = {{"judge", s.judge.value}, {"abstained", s.abstained}};
    if (s.abstained) {
      item["reason"] = s.reason;
    } else {
      item["score"] = s.score;
    }
    if (!s.raw_output.empty()) item["raw_output"] = s.raw_output;
    list.push_back(std::move(item));
  }
  return list;
}

json ResponseJson(const Generation& g) {
  json item = {{"text", g.text}, {"ok", g.ok}};
  if (g.quality) item["quality"] = *g.quality;
  if (!g.ok) item["error"] = g.error;
  return item;
}

}  // namespace

json ToJson(const CombatRecord& r, std::span<const Agent> agents) {
  json j;
  j["iteration"] = r.iteration;
  j["combat_id"] = r.combat_id;
  j["prompt_id"] = r.prompt.id;
  j["prompt"] = r.prompt.text;
  j["combatants"] = json::array();
  for (int side = 0; side < 2; ++side) {
    const ModelId id = r.combatants[side];
    json c = {{"id", id.value},
              {"label", agents[id.value].label},
              {"response", ResponseJson(r.responses[side])},
              {"scores", ScoresJson(r.scores[side])},
              {"reputation_before", r.reputation_before[side]},
              {"reputation_after", r.reputation_after[side]}};
    if (r.aggregated[side]) {
      c["aggregated"] = {{"value", r.aggregated[side]->value},
                         {"contributing_judges",
                          r.aggregated[side]->contributing_judges},
                         {"total_weight", r.aggregated[side]->total_weight}};
    } else {
      c["aggregated"] = nullptr;
    }
    j["combatants"].push_back(std::move(c));
  }
  j["random_branch"] = r.random_branch;
  j["proximity_rank"] = r.proximity_rank;
  j["judges"] = json::array();
  for (std::size_t k = 0; k < r.judges.size(); ++k) {
    j["judges"].push_back({{"id", r.judges[k].value}, {"weight", r.judge_weights[k]}});
  }
  j["winner"] = r.winner ? json(r.winner->value) : json(nullptr);
  j["tie"] = r.tie;
  j["void"] = r.void_combat;
  if (r.void_combat) j["void_reason"] = r.void_reason;
  return j;
}

json ToJson(const PreferencePair& p) {
  return {{"prompt", p.prompt},
          {"chosen", p.chosen},
          {"rejected", p.rejected},
          {"meta",
           {{"iteration", p.iteration},
            {"combat_id", p.combat_id},
            {"margin", p.margin},
            {"chosen_model", p.chosen_label},
            {"rejected_model", p.rejected_label}}}};
}

json ToJson(const ReputationSnapshot& s) {
  json models = json::array();
  for (std::size_t i = 0; i < s.models.size(); ++i) {
    const ModelSnapshot& m = s.models[i];
    json item = {{"id", i},
                 {"label", m.label},
                 {"reputation", m.reputation},
                 {"deviation", m.deviation},
                 {"judging_weight", m.judging_weight},
                 {"locked", m.locked}};
    item["skill"] = m.skill ? json(*m.skill) : json(nullptr);
    models.push_back(std::move(item));
  }
  return {{"iteration", s.iteration}, {"models", std::move(models)}};
}

json ToJson(const ProbeResponse& p) {
  json j = {{"iteration", p.iteration},
            {"prompt_id", p.prompt.id},
            {"prompt", p.prompt.text},
            {"model", p.model.value},
            {"label", p.label},
            {"ok", p.response.ok},
            {"text", p.response.text}};
  if (p.response.quality) j["quality"] = *p.response.quality;
  return j;
}

ReputationSnapshot SnapshotFromJson(const json& j) {
  ReputationSnapshot s;
  s.iteration = j.at("iteration").get<int>();
  for (const json& m : j.at("models")) {
    ModelSnapshot out;
    out.label = m.at("label").get<std::string>();
    out.reputation = m.at("reputation").get<double>();
    out.deviation = m.at("deviation").get<double>();
    out.judging_weight = m.at("judging_weight").get<double>();
    out.locked = m.at("locked").get<bool>();
    if (m.contains("skill") && !m.at("skill").is_null()) {
      out.skill = m.at("skill").get<double>();
    }
    s.models.push_back(std::move(out));
  }
  return s;
}

std::vector<json> ReadJsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::vector<json> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back(json::parse(line));
  }
  return out;
}

std::string Sha256Hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr);
  std::ostringstream out;
  for (unsigned int i = 0; i < length; ++i) {
    out << std::hex << std::setw(2) << std::setfill('0')
        << static_cast<int>(digest[i]);
  }
  return out.str();
}

std::filesystem::path PairsPath(const std::filesystem::path& dir, int iteration) {
  return dir / ("pairs_iter_" + std::to_string(iteration) + ".jsonl");
}

std::filesystem::path ResponsesPath(const std::filesystem::path& dir,
                                    int iteration) {
  return dir / ("responses_iter_" + std::to_string(iteration) + ".jsonl");
}

RunWriter::RunWriter(std::filesystem::path dir)
    : dir_(std::move(dir)), started_at_(UtcNow()) {
  std::filesystem::create_directories(dir_);
  for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
    const std::string name = entry.path().filename().string();
    if (name == kCombats || name == kHistory || name == "manifest.json" ||
        name.starts_with("pairs_iter_") || name.starts_with("responses_iter_")) {
      std::filesystem::remove(entry.path());
    }
  }
}

void RunWriter::WriteConfig(const ArenaConfig& config) {
  const std::string text = ToJson(config).dump(2) + "\n";
  WriteFile(dir_ / "config.json", text);
  config_digest_ = Sha256Hex(text);
  seed_ = config.seed;
}

void RunWriter::Append(const std::string& file, const std::string& text) {
  std::ofstream out(dir_ / file, std::ios::binary | std::ios::app);
  if (!out) throw std::runtime_error("cannot append to " + (dir_ / file).string());
  out << text;
}

void RunWriter::AppendCombats(std::span<const CombatRecord> records,
                              std::span<const Agent> agents) {
  std::string text;
  for (const CombatRecord& r : records) text += ToJson(r, agents).dump() + "\n";
  Append(kCombats, text);
}

std::filesystem::path RunWriter::WritePairs(int iteration,
                                            std::span<const PreferencePair> pairs) {
  std::string text;
  for (const PreferencePair& p : pairs) text += ToJson(p).dump() + "\n";
  const auto path = PairsPath(dir_, iteration);
  WriteFile(path, text);
  return path;
}

void RunWriter::WriteProbes(int iteration, std::span<const ProbeResponse> probes) {
  std::string text;
  for (const ProbeResponse& p : probes) text += ToJson(p).dump() + "\n";
  WriteFile(ResponsesPath(dir_, iteration), text);
}

void RunWriter::AppendSnapshot(const ReputationSnapshot& snapshot) {
  Append(kHistory, ToJson(snapshot).dump() + "\n");
}

void RunWriter::WriteManifest(const RunSummary& summary, std::string_view status) {
  json rows = json::array();
  for (std::size_t i = 0; i < summary.iterations.size(); ++i) {
    const IterationStats& s = summary.iterations[i];
    json row = {{"iteration", s.iteration},
                {"combats", s.combats},
                {"void_combats", s.void_combats},
                {"pairs", s.pairs},
                {"ties", s.ties},
                {"random_branch", s.random_branch},
                {"proximity_ranks", s.proximity_ranks}};
    row["newly_locked"] = s.newly_locked ? json(*s.newly_locked) : json(nullptr);
    if (i + 1 < summary.history.size()) {
      json reps = json::array();
      for (const ModelSnapshot& m : summary.history[i + 1].models) {
        reps.push_back(m.reputation);
      }
      row["reputations"] = std::move(reps);
    }
    rows.push_back(std::move(row));
  }
  const json manifest = {
      {"config_digest", config_digest_},
      {"seed", seed_},
      {"started_at", started_at_},
      {"finished_at", UtcNow()},
      {"status", status},
      {"matches_sequential_schedule", summary.matches_sequential_schedule},
      {"iterations", std::move(rows)}};
  WriteFile(dir_ / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace peerarena
