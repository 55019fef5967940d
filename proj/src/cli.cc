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

#include "peerarena/cli.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "peerarena/analysis.h"
#include "peerarena/arena.h"
#include "peerarena/config.h"
#include "peerarena/run_io.h"
#include "peerarena/types.h"

namespace peerarena {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string Fixed(double v, int digits = 6) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << v;
  return out.str();
}

struct RunOutcome {
  RunSummary summary;
  std::vector<Agent> agents;
};

RunOutcome Execute(const ArenaConfig& config, const fs::path& dir,
                   std::ostream& out) {
  config.Validate();
  std::vector<Prompt> prompts = config.prompt_file
                                    ? LoadPrompts(*config.prompt_file)
                                    : SyntheticPrompts(config.synthetic_prompts);
  JudgeTemplate rubric = config.judge_template
                             ? JudgeTemplate::FromFile(*config.judge_template)
                             : JudgeTemplate::Default();
  Arena arena(config, std::move(prompts), std::move(rubric));
  RunWriter writer(dir);
  RunOutcome outcome;
  outcome.summary = arena.Run(&writer);
  outcome.agents.assign(arena.agents().begin(), arena.agents().end());
  out << "run_dir: " << dir.string() << "\n";
  out << "config_digest: " << writer.config_digest() << "\n";
  return outcome;
}

// Prints the correlation block shared by `simulate` and `analyze`.
void PrintCorrelation(const ReputationSnapshot& final_snapshot,
                      const std::vector<double>& performance, std::ostream& out) {
  std::vector<double> reps;
  for (const ModelSnapshot& m : final_snapshot.models) reps.push_back(m.reputation);
  out << "final_iteration: " << final_snapshot.iteration << "\n";
  out << "final reputations (by reputation):\n";
  std::vector<std::size_t> order(reps.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return reps[a] > reps[b]; });
  for (std::size_t i : order) {
    const ModelSnapshot& m = final_snapshot.models[i];
    out << "  " << std::left << std::setw(14) << m.label << std::right
        << " reputation " << std::setw(10) << Fixed(m.reputation, 4)
        << "  performance " << std::setw(7) << Fixed(performance[i], 3)
        << "  judging_weight " << Fixed(m.judging_weight, 2) << "\n";
  }
  try {
    out << "pearson_r: " << Fixed(Pearson(reps, performance)) << "\n";
  } catch (const UndefinedCorrelation& e) {
    out << "pearson_r: undefined (" << e.what() << ")\n";
  }
  out << "concordance: " << PositionalConcordance(reps, performance) << "/"
      << reps.size() << "\n";
  out << "top3_within_top4: "
      << (TopSetContained(reps, performance, 3, 4) ? "yes" : "no") << "\n";
}

std::vector<double> SkillsOf(const ReputationSnapshot& snapshot) {
  std::vector<double> skills;
  for (const ModelSnapshot& m : snapshot.models) {
    if (!m.skill) return {};
    skills.push_back(*m.skill);
  }
  return skills;
}

void PrintMatchMix(const RunSummary& summary, std::ostream& out) {
  int combats = 0, random = 0, voids = 0, pairs = 0;
  std::vector<int> ranks;
  for (const IterationStats& s : summary.iterations) {
    combats += s.combats;
    random += s.random_branch;
    voids += s.void_combats;
    pairs += s.pairs;
    if (ranks.empty()) ranks.assign(s.proximity_ranks.size(), 0);
    for (std::size_t r = 0; r < s.proximity_ranks.size(); ++r) {
      ranks[r] += s.proximity_ranks[r];
    }
  }
  out << "combats: " << combats << "  void: " << voids << "  pairs: " << pairs
      << "\n";
  out << "match_mix: random_branch " << Fixed(double(random) / combats, 3)
      << "  opponent proximity rank frequencies [";
  for (std::size_t r = 0; r < ranks.size(); ++r) {
    out << (r ? " " : "") << Fixed(double(ranks[r]) / combats, 3);
  }
  out << "]\n";
}

std::vector<int> IterationsOnDisk(const fs::path& dir, const std::string& prefix) {
  std::vector<int> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.starts_with(prefix) && name.ends_with(".jsonl")) {
      out.push_back(std::stoi(name.substr(prefix.size())));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

int AnalyzeCorrelation(const fs::path& dir,
                       const std::optional<std::string>& csv_path,
                       const std::optional<std::string>& performance_csv,
                       std::ostream& out, std::ostream& err) {
  const fs::path history_path = dir / "reputation_history.jsonl";
  if (!fs::exists(history_path)) {
    err << "error: missing " << history_path.string() << "\n";
    return kExitUsage;
  }
  std::vector<ReputationSnapshot> history;
  for (const json& j : ReadJsonl(history_path)) history.push_back(SnapshotFromJson(j));
  if (history.empty()) {
    err << "error: empty reputation history\n";
    return kExitUsage;
  }
  const ReputationSnapshot& last = history.back();
  std::vector<double> performance;
  if (performance_csv) {
    std::ifstream in(*performance_csv);
    if (!in) {
      err << "error: cannot read " << *performance_csv << "\n";
      return kExitUsage;
    }
    std::map<std::string, double> by_label;
    std::string line;
    while (std::getline(in, line)) {
      const auto comma = line.find(',');
      if (comma == std::string::npos) continue;
      try {
        by_label[line.substr(0, comma)] = std::stod(line.substr(comma + 1));
      } catch (const std::exception&) {
        // Header or malformed row.
      }
    }
    for (const ModelSnapshot& m : last.models) {
      if (!by_label.contains(m.label)) {
        err << "error: no performance value for " << m.label << "\n";
        return kExitUsage;
      }
      performance.push_back(by_label[m.label]);
    }
  } else {
    performance = SkillsOf(last);
    if (performance.empty()) {
      err << "error: pool has no latent skills; pass --performance <csv>\n";
      return kExitUsage;
    }
  }
  out << "report: correlation\n";
  PrintCorrelation(last, performance, out);
  if (csv_path) {
    std::ofstream csv(*csv_path);
    csv << "iteration,model,reputation,skill\n";
    for (const ReputationSnapshot& s : history) {
      for (const ModelSnapshot& m : s.models) {
        csv << s.iteration << ',' << m.label << ',' << m.reputation << ','
            << (m.skill ? std::to_string(*m.skill) : "") << '\n';
      }
    }
    out << "csv: " << *csv_path << "\n";
  }
  return kExitOk;
}

int AnalyzeDiversity(const fs::path& dir, std::ostream& out, std::ostream& err) {
  // Groups keyed by (iteration, prompt id).
  std::map<std::pair<int, int>, std::vector<std::string>> groups;
  const std::vector<int> probe_iters = IterationsOnDisk(dir, "responses_iter_");
  std::string source;
  if (!probe_iters.empty()) {
    source = "probe responses";
    for (int t : probe_iters) {
      for (const json& j : ReadJsonl(ResponsesPath(dir, t))) {
        if (!j.value("ok", true)) continue;
        groups[{j.at("iteration").get<int>(), j.at("prompt_id").get<int>()}]
            .push_back(j.at("text").get<std::string>());
      }
    }
  } else if (fs::exists(dir / "combats.jsonl")) {
    source = "combat responses";
    for (const json& j : ReadJsonl(dir / "combats.jsonl")) {
      for (const json& c : j.at("combatants")) {
        if (!c.at("response").value("ok", true)) continue;
        groups[{j.at("iteration").get<int>(), j.at("prompt_id").get<int>()}]
            .push_back(c.at("response").at("text").get<std::string>());
      }
    }
  } else {
    err << "error: no responses_iter_*.jsonl or combats.jsonl in "
        << dir.string() << "\n";
    return kExitUsage;
  }
  out << "report: diversity (" << source << ")\n";
  std::size_t total_pairs = 0, reported = 0;
  double edit_sum = 0.0, bleu_sum = 0.0;
  for (const auto& [key, texts] : groups) {
    if (texts.size() < 2) continue;
    const DiversityReport r = ComputeDiversity(texts, 1);
    out << "  iteration " << key.first << " prompt " << key.second << ": pairs "
        << r.pair_count << "  edit " << Fixed(r.mean_edit_distance, 4) << "  bleu "
        << Fixed(r.mean_bleu_distance, 4) << "\n";
    total_pairs += r.pair_count;
    edit_sum += r.mean_edit_distance;
    bleu_sum += r.mean_bleu_distance;
    ++reported;
  }
  if (reported == 0) {
    err << "error: no prompt has two or more responses\n";
    return kExitUsage;
  }
  out << "prompts: " << reported << "  pairs: " << total_pairs << "\n";
  out << "mean_edit_distance: " << Fixed(edit_sum / reported) << "\n";
  out << "mean_bleu_distance: " << Fixed(bleu_sum / reported) << "\n";
  return kExitOk;
}

int Guard(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const TrainerFailure& e) {
    err << "trainer error: " << e.what() << "\n";
    return kExitTrainer;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace

int CmdRun(const std::string& config_path,
           const std::optional<std::string>& out_dir, std::ostream& out,
           std::ostream& err) {
  return Guard(err, [&] {
    const ArenaConfig config = LoadConfig(config_path);
    config.Validate();
    const RunOutcome outcome =
        Execute(config, out_dir.value_or(config.output_dir), out);
    PrintMatchMix(outcome.summary, out);
    const ReputationSnapshot& last = outcome.summary.history.back();
    for (const ModelSnapshot& m : last.models) {
      out << "  " << std::left << std::setw(14) << m.label << std::right
          << " reputation " << Fixed(m.reputation, 4) << "\n";
    }
    return kExitOk;
  });
}

int CmdSimulate(const std::string& preset,
                const std::vector<std::string>& overrides,
                const std::optional<std::string>& out_dir, std::ostream& out,
                std::ostream& err) {
  return Guard(err, [&] {
    std::optional<ArenaConfig> config = Preset(preset);
    if (!config) {
      std::string names;
      for (const std::string& n : PresetNames()) names += " " + n;
      throw ConfigError("unknown preset '" + preset + "'; available:" + names);
    }
    for (const std::string& o : overrides) ApplyOverride(*config, o);
    config->Validate();
    bool synthetic = true;
    for (const Agent& a : config->MaterializeAgents()) synthetic &= a.synthetic();
    if (!synthetic) throw ConfigError("simulate presets must use synthetic agents");
    out << "preset: " << preset << "  seed: " << config->seed << "\n";
    const RunOutcome outcome =
        Execute(*config, out_dir.value_or(config->output_dir), out);
    PrintMatchMix(outcome.summary, out);
    const ReputationSnapshot& last = outcome.summary.history.back();
    PrintCorrelation(last, SkillsOf(last), out);
    return kExitOk;
  });
}

int CmdAnalyze(const std::string& run_dir, AnalyzeReport report,
               const std::optional<std::string>& csv_path,
               const std::optional<std::string>& performance_csv,
               std::ostream& out, std::ostream& err) {
  return Guard(err, [&] {
    const fs::path dir(run_dir);
    if (!fs::is_directory(dir)) {
      err << "error: not a run directory: " << run_dir << "\n";
      return kExitUsage;
    }
    if (report != AnalyzeReport::kDiversity) {
      const int code = AnalyzeCorrelation(dir, csv_path, performance_csv, out, err);
      if (code != kExitOk) return code;
    }
    if (report != AnalyzeReport::kCorrelation) {
      const int code = AnalyzeDiversity(dir, out, err);
      if (code != kExitOk) return code;
    }
    return kExitOk;
  });
}

int CmdPrintDefaultConfig(std::ostream& out) {
  out << DefaultConfigText();
  return kExitOk;
}

int RunCli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Peer-judged tournament engine for collective model alignment"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> run_out;
  auto* run = app.add_subcommand("run", "Run an arena from a config file");
  run->add_option("--config", config_path, "Path to the JSON config")->required();
  run->add_option("--out", run_out, "Run directory (overrides output_dir)");

  std::string preset;
  std::vector<std::string> sets;
  std::optional<std::string> sim_out;
  auto* simulate = app.add_subcommand("simulate", "Run a synthetic preset");
  simulate->add_option("--preset", preset, "Preset name")->required();
  simulate->add_option("--set", sets, "Override, key=value (repeatable)");
  simulate->add_option("--out", sim_out, "Run directory");

  std::string run_dir;
  std::string which = "all";
  std::optional<std::string> csv_path, performance;
  auto* analyze = app.add_subcommand("analyze", "Analyze a finished run directory");
  analyze->add_option("--run", run_dir, "Run directory")->required();
  analyze->add_option("--report", which, "correlation, diversity or all")
      ->check(CLI::IsMember({"correlation", "diversity", "all"}));
  analyze->add_option("--csv", csv_path, "Write per-iteration reputation CSV");
  analyze->add_option("--performance", performance,
                      "CSV of label,score to correlate against");

  auto* defaults =
      app.add_subcommand("print-default-config", "Print the default config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (*run) return CmdRun(config_path, run_out, out, err);
  if (*simulate) return CmdSimulate(preset, sets, sim_out, out, err);
  if (*analyze) {
    const AnalyzeReport report = which == "correlation" ? AnalyzeReport::kCorrelation
                                 : which == "diversity" ? AnalyzeReport::kDiversity
                                                        : AnalyzeReport::kAll;
    return CmdAnalyze(run_dir, report, csv_path, performance, out, err);
  }
  if (*defaults) return CmdPrintDefaultConfig(out);
  return kExitUsage;
}

}  // namespace peerarena
