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

#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "dilemma/commands.h"

namespace {

void AddCommonFlags(CLI::App& cmd, dilemma::CommandFlags& flags) {
  cmd.add_option("--config", flags.config, "JSON config file");
  cmd.add_option("--condition", flags.condition, "dynamic|fixed|random");
  cmd.add_option("--attribute", flags.attribute, "hetero|homo-high|homo-low");
  cmd.add_option("--seed", flags.seed, "base seed");
  cmd.add_option("--seeds", flags.seeds, "number of seeds");
  cmd.add_option("--out", flags.out, "output directory")->required();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Intertemporal social dilemma simulator"};
  app.set_version_flag("--version", std::string(dilemma::kToolVersion));
  app.require_subcommand(1);

  dilemma::CommandFlags flags;
  std::string compare_mode = "both";
  std::string taus;

  CLI::App* run = app.add_subcommand("run", "run one experiment");
  AddCommonFlags(*run, flags);

  CLI::App* compare =
      app.add_subcommand("compare", "compare conditions and group attributes");
  AddCommonFlags(*compare, flags);
  compare->add_option("--mode", compare_mode, "conditions|attributes|both");

  CLI::App* sweep = app.add_subcommand("sweep", "sweep the reward window tau");
  AddCommonFlags(*sweep, flags);
  sweep->add_option("--taus", taus, "comma-separated tau values")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    flags.threads = dilemma::ThreadsFromEnvironment();
  } catch (const std::exception& e) {
    std::cerr << "dilemma: " << e.what() << "\n";
    return 1;
  }

  if (*run) return dilemma::CmdRun(flags, std::cerr);
  if (*compare) {
    auto mode = dilemma::ParseCompareMode(compare_mode);
    if (!mode) {
      std::cerr << "dilemma compare: --mode must be conditions, attributes or "
                   "both\n";
      return 1;
    }
    return dilemma::CmdCompare(flags, *mode, std::cerr);
  }
  std::vector<int> tau_values;
  try {
    tau_values = dilemma::ParseTauList(taus);
  } catch (const std::exception& e) {
    std::cerr << "dilemma sweep: " << e.what() << "\n";
    return 1;
  }
  return dilemma::CmdSweep(flags, tau_values, std::cerr);
}
