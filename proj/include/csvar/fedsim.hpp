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
// Federated training loop: every round, each client runs local SGD on its
// shard of that round's training images (raw, freshly noised, or the
// shuffled epoch variant r mod E), then the server replaces the global model
// with the sample-weighted mean of the client models.
#ifndef CSVAR_FEDSIM_HPP_
#define CSVAR_FEDSIM_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "csvar/dataset.hpp"
#include "csvar/mlp.hpp"
#include "csvar/partition.hpp"
#include "csvar/shuffler.hpp"
#include "csvar/variants.hpp"

namespace csvar {

enum class ProtectionKind { kNone, kDp, kCsvar };

std::string_view to_string(ProtectionKind kind);
ProtectionKind parse_protection(std::string_view text);

struct Protection {
  ProtectionKind kind = ProtectionKind::kNone;
  double dp_sigma = 50.0;
  ShuffleMode mode = ShuffleMode::kChannelWise;
  std::optional<int> block_size;
};

struct TrainConfig {
  int rounds = 20;
  int clients = 4;
  int local_epochs = 1;
  int batch_size = 32;
  double learning_rate = 0.1;
  int hidden = 128;
  Protection protection;
  std::uint64_t master_seed = 0;

  void validate() const;
};

struct RoundReport {
  int round = 0;  // 1-based: the model after `round` aggregations
  double accuracy = 0.0;
  double mean_loss = 0.0;  // sample-weighted mean of client training losses
  std::vector<std::size_t> client_counts;
};

struct LocalResult {
  ModelParams params;
  double mean_loss = 0.0;  // mean over the mini-batches seen
};

// local_epochs passes of mini-batch SGD; each pass visits the rows in an
// order drawn from Rng(seed) (one stream across passes).
LocalResult local_train(const ModelParams& params, const Matrix& features,
                        std::span<const int> labels, const TrainConfig& config,
                        std::uint64_t seed);

// Parameter-wise mean weighted by counts[k] / sum(counts).
ModelParams fedavg(std::span<const ModelParams> models, std::span<const std::size_t> counts);

std::uint64_t model_init_seed(std::uint64_t master_seed);
std::uint64_t client_round_seed(std::uint64_t master_seed, int round, int client);

// The ShuffleConfig a protection implies (csvar modes and dp sigma).
ShuffleConfig shuffle_config_for(const Protection& protection, std::uint64_t master_seed);

struct FederatedResult {
  double initial_accuracy = 0.0;
  std::vector<RoundReport> reports;
  ModelParams final_params;
};

// Called after every aggregation with the report and the new global model.
using RoundCallback = std::function<void(const RoundReport&, const ModelParams&)>;

// `train` images must share one padded shape; `test` is evaluated raw.
// csvar protection needs `variants` (variants[e][i] is training image i in
// epoch e); round r (0-based) trains on variants[r % variants.size()].
// Throws kMissingVariant if they are absent or do not cover `train`.
FederatedResult run_federated(const LabeledDataset& train, const LabeledDataset& test,
                              const ClientPartition& partition, const TrainConfig& config,
                              const EpochVariants* variants = nullptr,
                              const RoundCallback& on_round = {});

std::string reports_to_csv(std::span<const RoundReport> reports);
std::string reports_to_json(const FederatedResult& result);

}  // namespace csvar

#endif  // CSVAR_FEDSIM_HPP_
