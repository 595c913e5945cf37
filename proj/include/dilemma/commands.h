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

// The `run`, `compare` and `sweep` subcommands and the files they emit.
//
// Every artifact is rendered in memory first and written only after all
// replicas have finished. CSVs carry a header row, use '.' as the decimal
// separator and end every line with '\n'.

#ifndef DILEMMA_COMMANDS_H_
#define DILEMMA_COMMANDS_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "dilemma/experiment.h"
#include "json.hpp"

namespace dilemma {

inline constexpr std::string_view kToolVersion = "0.1.0";

struct CommandFlags {
  std::optional<std::filesystem::path> config;
  std::optional<std::string> condition;
  std::optional<std::string> attribute;
  std::optional<std::uint64_t> seed;
  std::optional<int> seeds;
  std::filesystem::path out;
  int threads = 0;  // 0 = hardware concurrency
};

// Loads the config file (or defaults) and applies flag overrides. Throws
// ConfigError on a bad file or flag value.
ExperimentConfig ResolveConfig(const CommandFlags& flags);

// Locale-independent decimal rendering with 12 significant digits.
std::string FormatNumber(double x);

// Name -> file contents, written together by WriteArtifacts.
using Artifacts = std::map<std::string, std::string>;

Artifacts RenderRunArtifacts(const ExperimentResult& result);
nlohmann::json RenderManifest(const ExperimentConfig& config,
                              std::string_view command,
                              const std::vector<std::string>& artifacts,
                              const nlohmann::json& extra = {});

// Creates `dir` if needed and writes every artifact plus manifest.json.
// Throws std::runtime_error on an I/O failure.
void WriteArtifacts(const std::filesystem::path& dir, Artifacts artifacts,
                    const ExperimentConfig& config, std::string_view command,
                    const nlohmann::json& extra = {});

enum class CompareMode { kConditions, kAttributes, kBoth };
std::optional<CompareMode> ParseCompareMode(std::string_view name);

// Orderings checked by `compare`. Each field is empty when the mode did not
// run the series it needs.
struct Verdict {
  bool insufficient_window = false;
  std::optional<bool> dynamic_gt_fixed;
  std::optional<bool> fixed_gt_random;
  std::optional<double> dynamic_over_random;
  std::optional<bool> hetero_gt_homohigh;
  std::optional<bool> homolow_le_random;
  std::map<std::string, double> final_means;
};

// Dynamic > Fixed, Fixed > Random, HomogeneousLow <= 1.1 * Random,
// Heterogeneous > HomogeneousHigh on the final means. The window is
// insufficient when fewer episodes than `final_window` were run.
Verdict ComputeVerdict(const std::map<std::string, double>& final_means,
                       int episodes, int final_window);
nlohmann::json VerdictToJson(const Verdict& verdict);

// Parses "1,2,5". Throws ConfigError("taus", ...) on a malformed list.
std::vector<int> ParseTauList(std::string_view text);

// Each returns the process exit code and reports failures on `err`.
int CmdRun(const CommandFlags& flags, std::ostream& err);
int CmdCompare(const CommandFlags& flags, CompareMode mode, std::ostream& err);
int CmdSweep(const CommandFlags& flags, const std::vector<int>& taus,
             std::ostream& err);

// DILEMMA_THREADS, or 0 when unset.
int ThreadsFromEnvironment();

}  // namespace dilemma

#endif  // DILEMMA_COMMANDS_H_
