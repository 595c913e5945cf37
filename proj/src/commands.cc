// Copyright 2026 The Dilemma Authors
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

#include "dilemma/commands.h"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "dilemma/config.h"

namespace dilemma {
namespace {

using nlohmann::json;

constexpr double kHomoLowSlack = 1.1;

constexpr char kSeedingScheme[] =
    "replica seed = base_seed + replica index; stream seed = "
    "splitmix64(splitmix64(replica seed) xor tag) with tags population=1, "
    "environment=2, policy=3; engine mt19937_64";

std::string Csv(std::initializer_list<std::string> fields) {
  std::string line;
  bool first = true;
  for (const std::string& f : fields) {
    if (!first) line += ',';
    line += f;
    first = false;
  }
  line += '\n';
  return line;
}

std::string Int(long long x) { return std::to_string(x); }

std::string Dump(const json& j) { return j.dump(2) + "\n"; }

std::vector<std::uint64_t> SeedList(const ExperimentConfig& config) {
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < config.n_seeds; ++i) seeds.push_back(config.ReplicaSeed(i));
  return seeds;
}

json SummaryJson(const ExperimentResult& result) {
  json per_seed = json::array();
  for (const MetricsRecord& r : result.replicas) {
    per_seed.push_back({{"seed", r.seed},
                        {"final_return", r.final_return},
                        {"gini", r.inequality.gini},
                        {"range", r.inequality.range}});
  }
  const Aggregate& agg = result.aggregate;
  return {{"condition", ConditionName(result.config.condition)},
          {"attribute", AttributeName(result.config.attribute)},
          {"episodes", result.config.episodes},
          {"final_window", result.config.final_window},
          {"final_mean", agg.final_mean},
          {"final_sd", agg.final_sd},
          {"gini", agg.gini_mean},
          {"range", agg.range_mean},
          {"per_seed", per_seed}};
}

template <typename Fn>
int Guarded(std::ostream& err, std::string_view command, Fn fn) {
  try {
    fn();
    return 0;
  } catch (const std::exception& e) {
    err << "dilemma " << command << ": " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

std::string FormatNumber(double x) {
  char buf[64];
  auto [end, ec] =
      std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 12);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, end);
}

int ThreadsFromEnvironment() {
  const char* value = std::getenv("DILEMMA_THREADS");
  if (value == nullptr || *value == '\0') return 0;
  int threads = 0;
  const std::string_view text(value);
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), threads);
  if (ec != std::errc() || ptr != text.data() + text.size() || threads < 0) {
    throw ConfigError("DILEMMA_THREADS", "expected a non-negative integer");
  }
  return threads;
}

ExperimentConfig ResolveConfig(const CommandFlags& flags) {
  ExperimentConfig config =
      flags.config ? ParseConfig(*flags.config) : ExperimentConfig{};
  if (flags.condition) {
    auto c = ParseCondition(*flags.condition);
    if (!c) throw ConfigError("condition", "unrecognized value \"" + *flags.condition + "\"");
    config.condition = *c;
  }
  if (flags.attribute) {
    auto a = ParseAttribute(*flags.attribute);
    if (!a) throw ConfigError("attribute", "unrecognized value \"" + *flags.attribute + "\"");
    config.attribute = *a;
  }
  if (flags.seed) config.base_seed = *flags.seed;
  if (flags.seeds) config.n_seeds = *flags.seeds;
  ValidateConfig(config);
  return config;
}

Artifacts RenderRunArtifacts(const ExperimentResult& result) {
  const ExperimentConfig& config = result.config;
  Artifacts files;

  std::string returns = Csv({"episode", "seed", "collective_return"});
  for (const MetricsRecord& r : result.replicas) {
    for (int e = 0; e < config.episodes; ++e) {
      returns += Csv({Int(e + 1), std::to_string(r.seed),
                      FormatNumber(r.per_episode_collective_return[e])});
    }
  }
  files["returns.csv"] = std::move(returns);

  std::string agents = Csv(
      {"agent", "seed", "total_reward", "target_reward", "garbage_fraction"});
  for (const MetricsRecord& r : result.replicas) {
    for (int i = 0; i < config.n_agents; ++i) {
      agents += Csv({Int(i + 1), std::to_string(r.seed),
                     FormatNumber(r.per_agent_total[i]),
                     FormatNumber(r.targets[i]),
                     FormatNumber(OccupancyFraction(r.final_occupancy[i],
                                                    Half::kGarbage))});
    }
  }
  files["agents.csv"] = std::move(agents);

  for (int i = 0; i < config.n_agents; ++i) {
    OccupancyGrid total{};
    for (const MetricsRecord& r : result.replicas) {
      for (int c = 0; c < kNumCells; ++c) total[c] += r.occupancy[i][c];
    }
    std::string grid;
    for (int col = 0; col < kCols; ++col) {
      if (col) grid += ',';
      grid += "c" + Int(col);
    }
    grid += '\n';
    for (int row = 0; row < kRows; ++row) {
      for (int col = 0; col < kCols; ++col) {
        if (col) grid += ',';
        grid += Int(total[GridGeometry::Flat({row, col})]);
      }
      grid += '\n';
    }
    files["occupancy_" + Int(i + 1) + ".csv"] = std::move(grid);
  }

  files["summary.json"] = Dump(SummaryJson(result));
  return files;
}

json RenderManifest(const ExperimentConfig& config, std::string_view command,
                    const std::vector<std::string>& artifacts,
                    const json& extra) {
  json manifest = {{"tool_version", kToolVersion},
                   {"command", command},
                   {"config_snapshot", ConfigToJson(config)},
                   {"seed_list", SeedList(config)},
                   {"seeding_scheme", kSeedingScheme},
                   {"artifact_paths", artifacts}};
  if (extra.is_object()) {
    for (const auto& [k, v] : extra.items()) manifest[k] = v;
  }
  return manifest;
}

void WriteArtifacts(const std::filesystem::path& dir, Artifacts artifacts,
                    const ExperimentConfig& config, std::string_view command,
                    const json& extra) {
  std::vector<std::string> names;
  for (const auto& [name, body] : artifacts) names.push_back(name);
  names.push_back("manifest.json");
  artifacts["manifest.json"] =
      Dump(RenderManifest(config, command, names, extra));

  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create " + dir.string() + ": " +
                             ec.message());
  }
  for (const auto& [name, body] : artifacts) {
    const std::filesystem::path path = dir / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << body;
    out.close();
    if (!out) throw std::runtime_error("failed to write " + path.string());
  }
}

std::optional<CompareMode> ParseCompareMode(std::string_view name) {
  if (name == "conditions") return CompareMode::kConditions;
  if (name == "attributes") return CompareMode::kAttributes;
  if (name == "both") return CompareMode::kBoth;
  return std::nullopt;
}

Verdict ComputeVerdict(const std::map<std::string, double>& final_means,
                       int episodes, int final_window) {
  Verdict v;
  v.final_means = final_means;
  v.insufficient_window = episodes < final_window;
  auto get = [&](const char* key) -> std::optional<double> {
    auto it = final_means.find(key);
    if (it == final_means.end()) return std::nullopt;
    return it->second;
  };
  const auto dynamic = get("dynamic");
  const auto fixed = get("fixed");
  const auto random = get("random");
  const auto hetero = get("hetero");
  const auto homo_high = get("homo-high");
  const auto homo_low = get("homo-low");
  if (dynamic && fixed) v.dynamic_gt_fixed = *dynamic > *fixed;
  if (fixed && random) v.fixed_gt_random = *fixed > *random;
  if (dynamic && random && *random > 0) v.dynamic_over_random = *dynamic / *random;
  if (hetero && homo_high) v.hetero_gt_homohigh = *hetero > *homo_high;
  if (homo_low && random) {
    v.homolow_le_random = *homo_low <= kHomoLowSlack * *random;
  }
  return v;
}

json VerdictToJson(const Verdict& v) {
  auto opt = [](const auto& x) -> json {
    if (x) return *x;
    return nullptr;
  };
  json means = json::object();
  for (const auto& [k, x] : v.final_means) means[k] = x;
  return {{"insufficient_window", v.insufficient_window},
          {"dynamic_gt_fixed", opt(v.dynamic_gt_fixed)},
          {"fixed_gt_random", opt(v.fixed_gt_random)},
          {"dynamic_over_random", opt(v.dynamic_over_random)},
          {"hetero_gt_homohigh", opt(v.hetero_gt_homohigh)},
          {"homolow_le_random", opt(v.homolow_le_random)},
          {"final_means", means}};
}

std::vector<int> ParseTauList(std::string_view text) {
  std::vector<int> taus;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const std::string_view item = text.substr(start, comma - start);
    int tau = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), tau);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) {
      throw ConfigError("taus", "malformed list \"" + std::string(text) + "\"");
    }
    taus.push_back(tau);
    start = comma + 1;
  }
  return taus;
}

int CmdRun(const CommandFlags& flags, std::ostream& err) {
  return Guarded(err, "run", [&] {
    const ExperimentConfig config = ResolveConfig(flags);
    const ExperimentResult result = RunExperiment(config, flags.threads);
    WriteArtifacts(flags.out, RenderRunArtifacts(result), config, "run");
  });
}

int CmdCompare(const CommandFlags& flags, CompareMode mode, std::ostream& err) {
  return Guarded(err, "compare", [&] {
    const ExperimentConfig base = ResolveConfig(flags);
    std::map<std::pair<LearningRateMode, GroupAttribute>, Aggregate> cache;
    auto run = [&](LearningRateMode condition,
                   GroupAttribute attribute) -> const Aggregate& {
      const auto key = std::make_pair(condition, attribute);
      auto it = cache.find(key);
      if (it != cache.end()) return it->second;
      ExperimentConfig config = base;
      config.condition = condition;
      config.attribute = attribute;
      ValidateConfig(config);
      return cache.emplace(key, RunExperiment(config, flags.threads).aggregate)
          .first->second;
    };

    std::string csv =
        Csv({"mode", "series", "episode", "mean_return", "sd_return"});
    std::map<std::string, double> finals;
    auto emit = [&](const char* mode_name, std::string_view series,
                    const Aggregate& agg) {
      for (int e = 0; e < base.episodes; ++e) {
        csv += Csv({mode_name, std::string(series), Int(e + 1),
                    FormatNumber(agg.mean[e]), FormatNumber(agg.sd[e])});
      }
      finals[std::string(series)] = agg.final_mean;
    };

    if (mode != CompareMode::kAttributes) {
      for (LearningRateMode c :
           {LearningRateMode::kDynamic, LearningRateMode::kFixed,
            LearningRateMode::kRandomPolicy}) {
        emit("conditions", ConditionName(c), run(c, base.attribute));
      }
    }
    if (mode != CompareMode::kConditions) {
      for (GroupAttribute a :
           {GroupAttribute::kHeterogeneous, GroupAttribute::kHomogeneousHigh,
            GroupAttribute::kHomogeneousLow}) {
        emit("attributes", AttributeName(a), run(LearningRateMode::kDynamic, a));
      }
      if (!finals.count("random")) {
        finals["random"] = run(LearningRateMode::kRandomPolicy,
                               GroupAttribute::kHeterogeneous)
                               .final_mean;
      }
    }

    const Verdict verdict =
        ComputeVerdict(finals, base.episodes, base.final_window);
    Artifacts files;
    files["compare.csv"] = std::move(csv);
    files["verdict.json"] = Dump(VerdictToJson(verdict));
    const char* mode_name = mode == CompareMode::kConditions   ? "conditions"
                            : mode == CompareMode::kAttributes ? "attributes"
                                                               : "both";
    WriteArtifacts(flags.out, std::move(files), base, "compare",
                   {{"compare_mode", mode_name}});
  });
}

int CmdSweep(const CommandFlags& flags, const std::vector<int>& taus,
             std::ostream& err) {
  return Guarded(err, "sweep", [&] {
    SweepSpec sweep{ResolveConfig(flags), taus};
    const std::vector<SweepRow> rows = RunSweep(sweep, flags.threads);
    std::string csv = Csv({"tau", "mean_final_return", "sd"});
    json tau_list = json::array();
    for (const SweepRow& row : rows) {
      csv += Csv({Int(row.tau), FormatNumber(row.mean_final_return),
                  FormatNumber(row.sd)});
      tau_list.push_back(row.tau);
    }
    WriteArtifacts(flags.out, {{"sweep.csv", std::move(csv)}}, sweep.base,
                   "sweep", {{"taus", tau_list}});
  });
}

}  // namespace dilemma
