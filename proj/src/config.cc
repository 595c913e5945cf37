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

#include "dilemma/config.h"

#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace dilemma {
namespace {

using nlohmann::json;

void RejectUnknown(const json& obj, const std::string& prefix,
                   const std::set<std::string>& known) {
  for (const auto& [key, value] : obj.items()) {
    if (!known.count(key)) throw ConfigError(prefix + key, "unknown key");
  }
}

const json* Find(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

void ReadNumber(const json& obj, const std::string& prefix, const char* key,
                double& out) {
  if (const json* v = Find(obj, key)) {
    if (!v->is_number()) throw ConfigError(prefix + key, "expected a number");
    out = v->get<double>();
  }
}

void ReadInt(const json& obj, const std::string& prefix, const char* key,
             int& out) {
  if (const json* v = Find(obj, key)) {
    if (!v->is_number_integer()) {
      throw ConfigError(prefix + key, "expected an integer");
    }
    const auto x = v->get<long long>();
    if (x < std::numeric_limits<int>::min() ||
        x > std::numeric_limits<int>::max()) {
      throw ConfigError(prefix + key, "out of range");
    }
    out = static_cast<int>(x);
  }
}

void ReadSeed(const json& obj, const char* key, std::uint64_t& out) {
  if (const json* v = Find(obj, key)) {
    if (!v->is_number_unsigned()) {
      throw ConfigError(key, "expected a non-negative integer");
    }
    out = v->get<std::uint64_t>();
  }
}

template <typename T, typename Parser>
void ReadEnum(const json& obj, const char* key, Parser parse, T& out) {
  if (const json* v = Find(obj, key)) {
    if (!v->is_string()) throw ConfigError(key, "expected a string");
    auto parsed = parse(v->get<std::string>());
    if (!parsed) {
      throw ConfigError(key, "unrecognized value \"" + v->get<std::string>() +
                                 "\"");
    }
    out = *parsed;
  }
}

void ReadRange(const json& obj, const std::string& prefix, const char* key,
               TargetRange& out) {
  if (const json* v = Find(obj, key)) {
    if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number() ||
        !(*v)[1].is_number()) {
      throw ConfigError(prefix + key, "expected [min, max]");
    }
    out = {(*v)[0].get<double>(), (*v)[1].get<double>()};
  }
}

}  // namespace

void ValidateConfig(const ExperimentConfig& config) {
  try {
    config.Validate();
    config.ValidateTargets();
  } catch (const std::invalid_argument& e) {
    const std::string what = e.what();
    const auto colon = what.find(':');
    throw ConfigError(what.substr(0, colon),
                      colon == std::string::npos ? what
                                                 : what.substr(colon + 2));
  }
}

ExperimentConfig ConfigFromJson(const json& j) {
  if (!j.is_object()) throw ConfigError("<root>", "expected a JSON object");
  RejectUnknown(j, "",
                {"condition", "fixed_learning_rate", "attribute", "placement",
                 "n_agents", "episodes", "trials_per_episode", "n_seeds",
                 "base_seed", "tau", "beta", "gamma", "epsilon",
                 "q_init", "final_window", "env", "population"});
  ExperimentConfig c;
  ReadEnum(j, "condition", ParseCondition, c.condition);
  ReadNumber(j, "", "fixed_learning_rate", c.fixed_learning_rate);
  ReadEnum(j, "attribute", ParseAttribute, c.attribute);
  ReadEnum(j, "placement", ParsePlacement, c.placement);
  ReadInt(j, "", "n_agents", c.n_agents);
  ReadInt(j, "", "episodes", c.episodes);
  ReadInt(j, "", "trials_per_episode", c.trials_per_episode);
  ReadInt(j, "", "n_seeds", c.n_seeds);
  ReadSeed(j, "base_seed", c.base_seed);
  ReadInt(j, "", "tau", c.tau);
  ReadNumber(j, "", "beta", c.beta);
  ReadNumber(j, "", "gamma", c.gamma);
  ReadNumber(j, "", "epsilon", c.epsilon);
  ReadNumber(j, "", "q_init", c.q_init);
  ReadInt(j, "", "final_window", c.final_window);

  if (const json* env = Find(j, "env")) {
    if (!env->is_object()) throw ConfigError("env", "expected an object");
    RejectUnknown(*env, "env.",
                  {"delta_g", "sigma", "delta_sg", "r_a", "r_g", "view",
                   "initial_apple_density", "initial_garbage_density"});
    ReadNumber(*env, "env.", "delta_g", c.env.delta_g);
    ReadNumber(*env, "env.", "sigma", c.env.sigma);
    ReadNumber(*env, "env.", "delta_sg", c.env.delta_sg);
    ReadNumber(*env, "env.", "r_a", c.env.r_a);
    ReadNumber(*env, "env.", "r_g", c.env.r_g);
    ReadInt(*env, "env.", "view", c.env.view);
    ReadNumber(*env, "env.", "initial_apple_density",
               c.env.initial_apple_density);
    ReadNumber(*env, "env.", "initial_garbage_density",
               c.env.initial_garbage_density);
  }
  if (const json* pop = Find(j, "population")) {
    if (!pop->is_object()) {
      throw ConfigError("population", "expected an object");
    }
    RejectUnknown(*pop, "population.", {"low_range", "high_range"});
    ReadRange(*pop, "population.", "low_range", c.population.low);
    ReadRange(*pop, "population.", "high_range", c.population.high);
  }
  ValidateConfig(c);
  return c;
}

ExperimentConfig ParseConfigText(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("malformed JSON: ") + e.what());
  }
  return ConfigFromJson(j);
}

ExperimentConfig ParseConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseConfigText(buffer.str());
}

json ConfigToJson(const ExperimentConfig& c) {
  return json{
      {"condition", ConditionName(c.condition)},
      {"fixed_learning_rate", c.fixed_learning_rate},
      {"attribute", AttributeName(c.attribute)},
      {"placement", PlacementName(c.placement)},
      {"n_agents", c.n_agents},
      {"episodes", c.episodes},
      {"trials_per_episode", c.trials_per_episode},
      {"n_seeds", c.n_seeds},
      {"base_seed", c.base_seed},
      {"tau", c.tau},
      {"beta", c.beta},
      {"gamma", c.gamma},
      {"epsilon", c.epsilon},
      {"q_init", c.q_init},
      {"final_window", c.final_window},
      {"env",
       {{"delta_g", c.env.delta_g},
        {"sigma", c.env.sigma},
        {"delta_sg", c.env.delta_sg},
        {"r_a", c.env.r_a},
        {"r_g", c.env.r_g},
        {"view", c.env.view},
        {"initial_apple_density", c.env.initial_apple_density},
        {"initial_garbage_density", c.env.initial_garbage_density}}},
      {"population",
       {{"low_range", {c.population.low.min, c.population.low.max}},
        {"high_range", {c.population.high.min, c.population.high.max}}}},
  };
}

}  // namespace dilemma
