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
#include "experiment_config.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "csvar/error.hpp"
#include "csvar/shuffler.hpp"

namespace csvar::cli {

namespace {

using nlohmann::json;

template <typename T>
void read_field(const json& j, const char* key, T& out) {
  if (!j.contains(key) || j[key].is_null()) return;
  try {
    out = j[key].get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::kInvalidArgument, std::string("config field '") + key + "' has the wrong type");
  }
}

template <typename T>
void read_optional(const json& j, const char* key, std::optional<T>& out) {
  if (!j.contains(key) || j[key].is_null()) return;
  T value{};
  read_field(j, key, value);
  out = value;
}

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

LabeledDataset load_split(const DatasetPaths& paths, const std::string& images, const std::string& labels,
                          std::optional<std::size_t> limit) {
  LabeledDataset ds;
  if (paths.format == "idx") {
    ds = load_idx(images, labels);
  } else {
    const std::vector<std::filesystem::path> files{images};
    ds = load_cifar_bin(files);
  }
  if (limit && *limit < ds.size()) {
    std::vector<std::size_t> idx(*limit);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    ds = ds.subset(idx);
  }
  return pad_to_region_multiple(ds);
}

}  // namespace

const std::vector<std::string>& experiment_config_keys() {
  static const std::vector<std::string> keys{
      "format",         "train_images", "train_labels", "test_images",   "test_labels",
      "train_limit",    "test_limit",   "protection",   "dp_sigma",      "mode",
      "block_size",     "variants",     "variant_epochs", "rounds",      "clients",
      "alpha",          "local_epochs", "batch_size",   "learning_rate", "hidden",
      "seed",           "member_count"};
  return keys;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kInvalidArgument, "config must be a JSON object");
  const auto& keys = experiment_config_keys();
  for (const auto& [key, value] : j.items()) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw Error(ErrorCode::kInvalidArgument, "unknown config field '" + key + "'");
    }
  }
  ExperimentConfig c;
  read_field(j, "format", c.data.format);
  read_field(j, "train_images", c.data.train_images);
  read_field(j, "train_labels", c.data.train_labels);
  read_field(j, "test_images", c.data.test_images);
  read_field(j, "test_labels", c.data.test_labels);
  read_optional(j, "train_limit", c.data.train_limit);
  read_optional(j, "test_limit", c.data.test_limit);
  read_field(j, "protection", c.protection);
  read_field(j, "dp_sigma", c.dp_sigma);
  read_field(j, "mode", c.mode);
  read_optional(j, "block_size", c.block_size);
  read_field(j, "variants", c.variants);
  read_field(j, "variant_epochs", c.variant_epochs);
  read_field(j, "rounds", c.rounds);
  read_field(j, "clients", c.clients);
  read_optional(j, "alpha", c.alpha);
  read_field(j, "local_epochs", c.local_epochs);
  read_field(j, "batch_size", c.batch_size);
  read_field(j, "learning_rate", c.learning_rate);
  read_field(j, "hidden", c.hidden);
  read_field(j, "seed", c.seed);
  read_optional(j, "member_count", c.member_count);
  return c;
}

json ExperimentConfig::to_json() const {
  json j;
  j["format"] = data.format;
  j["train_images"] = data.train_images;
  j["train_labels"] = data.train_labels;
  j["test_images"] = data.test_images;
  j["test_labels"] = data.test_labels;
  j["train_limit"] = optional_json(data.train_limit);
  j["test_limit"] = optional_json(data.test_limit);
  j["protection"] = protection;
  j["dp_sigma"] = dp_sigma;
  j["mode"] = mode;
  j["block_size"] = optional_json(block_size);
  j["variants"] = variants;
  j["variant_epochs"] = variant_epochs;
  j["rounds"] = rounds;
  j["clients"] = clients;
  j["alpha"] = optional_json(alpha);
  j["local_epochs"] = local_epochs;
  j["batch_size"] = batch_size;
  j["learning_rate"] = learning_rate;
  j["hidden"] = hidden;
  j["seed"] = seed;
  j["member_count"] = optional_json(member_count);
  return j;
}

void ExperimentConfig::validate() const {
  if (data.format != "idx" && data.format != "cifar") {
    throw Error(ErrorCode::kInvalidArgument, "format must be 'idx' or 'cifar'");
  }
  if (data.train_images.empty() || data.test_images.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "train_images and test_images are required");
  }
  if (data.format == "idx" && (data.train_labels.empty() || data.test_labels.empty())) {
    throw Error(ErrorCode::kInvalidArgument, "idx datasets need train_labels and test_labels");
  }
  if (variant_epochs < 1) throw Error(ErrorCode::kInvalidArgument, "variant_epochs must be >= 1");
  if (alpha && !(*alpha > 0.0)) throw Error(ErrorCode::kInvalidArgument, "alpha must be > 0");
  if (member_count && *member_count == 0) {
    throw Error(ErrorCode::kInvalidArgument, "member_count must be >= 1");
  }
  if (!(learning_rate > 0.0)) throw Error(ErrorCode::kInvalidArgument, "learning_rate must be > 0");
  parse_shuffle_mode(mode);
  train_config().validate();
}

TrainConfig ExperimentConfig::train_config() const {
  TrainConfig t;
  t.rounds = rounds;
  t.clients = clients;
  t.local_epochs = local_epochs;
  t.batch_size = batch_size;
  t.learning_rate = learning_rate;
  t.hidden = hidden;
  t.master_seed = seed;
  t.protection.kind = parse_protection(protection);
  t.protection.dp_sigma = dp_sigma;
  t.protection.mode = parse_shuffle_mode(mode);
  t.protection.block_size = block_size;
  return t;
}

LoadedData load_datasets(const DatasetPaths& paths) {
  LoadedData out;
  out.train = load_split(paths, paths.train_images, paths.train_labels, paths.train_limit);
  out.test = load_split(paths, paths.test_images, paths.test_labels, paths.test_limit);
  if (out.train.empty()) throw Error(ErrorCode::kInvalidArgument, "training split is empty");
  if (!out.test.empty() && !out.test.images.front().same_shape(out.train.images.front())) {
    throw Error(ErrorCode::kShapeMismatch, "train and test images differ in shape");
  }
  return out;
}

}  // namespace csvar::cli
