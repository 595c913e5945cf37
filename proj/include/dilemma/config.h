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

// JSON experiment configuration.
//
// Every key is optional; missing keys take the ExperimentConfig defaults.
// Unknown keys, wrong types and constraint violations are errors whose
// message starts with the offending key.
//
//   {
//     "condition": "dynamic" | "fixed" | "random",
//     "fixed_learning_rate": 0.001,
//     "attribute": "hetero" | "homo-high" | "homo-low",
//     "placement": "split" | "uniform",
//     "n_agents": 6, "episodes": 300, "trials_per_episode": 100,
//     "n_seeds": 5, "base_seed": 1, "tau": 5, "final_window": 50,
//     "beta": 0.001, "gamma": 0.9, "epsilon": 0.05, "q_init": 50,
//     "env": {"delta_g": 0.01, "sigma": 1.0, "delta_sg": 60, "r_a": 10,
//             "r_g": 5, "view": 2, "initial_apple_density": 0.3,
//             "initial_garbage_density": 0.0},
//     "population": {"low_range": [10, 25], "high_range": [50, 100]}
//   }

#ifndef DILEMMA_CONFIG_H_
#define DILEMMA_CONFIG_H_

#include <filesystem>
#include <stdexcept>
#include <string>

#include "dilemma/experiment.h"
#include "json.hpp"

namespace dilemma {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

// Parses and validates (including the rewarder classification for the
// configured tau).
ExperimentConfig ConfigFromJson(const nlohmann::json& j);
ExperimentConfig ParseConfigText(const std::string& text);
ExperimentConfig ParseConfig(const std::filesystem::path& path);

// Full resolved configuration; ConfigFromJson(ConfigToJson(c)) == c.
nlohmann::json ConfigToJson(const ExperimentConfig& config);

// Runs Validate() and ValidateTargets(), rethrowing as ConfigError.
void ValidateConfig(const ExperimentConfig& config);

}  // namespace dilemma

#endif  // DILEMMA_CONFIG_H_
