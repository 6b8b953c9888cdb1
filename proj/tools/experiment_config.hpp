// Copyright 2026 The csvar Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Declarative description of one `csvar simulate` run. Stored as a flat
// JSON object; the fully resolved copy is written next to the run outputs.
#ifndef CSVAR_TOOLS_EXPERIMENT_CONFIG_HPP_
#define CSVAR_TOOLS_EXPERIMENT_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "csvar/dataset.hpp"
#include "csvar/fedsim.hpp"

namespace csvar::cli {

struct DatasetPaths {
  std::string format = "idx";  // "idx" or "cifar"
  std::string train_images;
  std::string train_labels;    // idx only
  std::string test_images;
  std::string test_labels;     // idx only
  std::optional<std::size_t> train_limit;
  std::optional<std::size_t> test_limit;
};

struct ExperimentConfig {
  DatasetPaths data;
  std::string protection = "none";
  double dp_sigma = 50.0;
  std::string mode = "channel-wise";
  std::optional<int> block_size;
  std::string variants;        // manifest path; empty -> generate in memory
  std::uint64_t variant_epochs = 10;
  int rounds = 20;
  int clients = 4;
  std::optional<double> alpha;  // absent -> IID
  int local_epochs = 1;
  int batch_size = 32;
  double learning_rate = 0.1;
  int hidden = 128;
  std::uint64_t seed = 0;
  // Train on a seeded member cohort of this size instead of the full split.
  std::optional<std::size_t> member_count;

  // Rejects unknown keys and wrongly typed values (kInvalidArgument).
  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  void validate() const;
  TrainConfig train_config() const;
};

// The keys accepted by ExperimentConfig::from_json, in schema order.
const std::vector<std::string>& experiment_config_keys();

struct LoadedData {
  LabeledDataset train;
  LabeledDataset test;
};

// Loads, truncates to the limits and reflect-pads both splits.
LoadedData load_datasets(const DatasetPaths& paths);

}  // namespace csvar::cli

#endif  // CSVAR_TOOLS_EXPERIMENT_CONFIG_HPP_
