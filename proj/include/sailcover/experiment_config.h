/*
 * Copyright 2026 The Sailcover Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SAILCOVER_EXPERIMENT_CONFIG_H_
#define SAILCOVER_EXPERIMENT_CONFIG_H_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sailcover/env_model.h"
#include "sailcover/mcts_planner.h"
#include "sailcover/sailing_kinematics.h"

namespace sailcover {

// Bad or unknown configuration; 'key' names the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& key, const std::string& message)
      : std::runtime_error(key + ": " + message), key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

// A planning method: the boustrophedon baseline or MCTS with a forecast
// horizon.
struct Method {
  bool baseline = true;
  int horizon = 0;

  // "base", "mcts_k<N>", or "mcts_kN" (horizon taken from the config).
  static Method Parse(const std::string& name, int config_horizon);
  std::string Name() const;
};

struct ExperimentConfig {
  GridSpec grid;
  Cell start{0, 0};

  FieldModel::Kind field_kind = FieldModel::Kind::kRandom;
  FieldBounds bounds;
  FlowVector uniform_wind{3.0, 0.0};
  FlowVector uniform_current{0.0, 0.0};
  double no_go_angle = 40.0;
  std::string polar_path;  // empty: built-in table

  PlannerConfig planner;
  ForecastNoise forecast;

  std::vector<uint64_t> seeds = {40, 41, 42, 43, 44, 45, 46, 47};
  std::vector<std::string> methods = {"base", "mcts_k0", "mcts_k1"};
  std::string out_dir = "out";
  int max_stages = 50;
  int baseline_wait_limit = 20;

  // Parses INI-style text: [section] headers and 'key = value' lines.
  // Missing keys keep their defaults; unknown keys throw ConfigError.
  static ExperimentConfig FromString(const std::string& text);
  static ExperimentConfig FromFile(const std::string& path);

  // Throws ConfigError on an invalid value.
  void Validate() const;

  PolarTable LoadPolar() const;
  FieldModel MakeFieldModel(uint64_t seed) const;

  // Canonical text of every setting that affects mission results.
  std::string Canonical() const;
  // 16 hex digits of a 64-bit FNV-1a hash of Canonical() and the polar
  // table.
  std::string Digest() const;
};

// "a..b" (inclusive) or a comma separated list.
std::vector<uint64_t> ParseSeedList(const std::string& text);

}  // namespace sailcover

#endif  // SAILCOVER_EXPERIMENT_CONFIG_H_
