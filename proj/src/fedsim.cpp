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
#include "csvar/fedsim.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>

#include <nlohmann/json.hpp>

#include "csvar/error.hpp"
#include "csvar/rng.hpp"

namespace csvar {

namespace {

constexpr std::uint64_t kInitDomain = 0x696e6974ULL;   // "init"
constexpr std::uint64_t kTrainDomain = 0x747261696eULL;  // "train"

Matrix gather_rows(const Matrix& x, std::span<const std::size_t> rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(rows[i]));
  }
  return out;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string_view to_string(ProtectionKind kind) {
  switch (kind) {
    case ProtectionKind::kNone: return "none";
    case ProtectionKind::kDp: return "dp";
    case ProtectionKind::kCsvar: return "csvar";
  }
  return "none";
}

ProtectionKind parse_protection(std::string_view text) {
  if (text == "none") return ProtectionKind::kNone;
  if (text == "dp") return ProtectionKind::kDp;
  if (text == "csvar") return ProtectionKind::kCsvar;
  throw Error(ErrorCode::kInvalidArgument, "unknown protection '" + std::string(text) + "'");
}

void TrainConfig::validate() const {
  if (rounds < 0) throw Error(ErrorCode::kInvalidArgument, "rounds must be >= 0");
  if (clients < 1) throw Error(ErrorCode::kInvalidArgument, "clients must be >= 1");
  if (local_epochs < 1) throw Error(ErrorCode::kInvalidArgument, "local_epochs must be >= 1");
  if (batch_size < 1) throw Error(ErrorCode::kInvalidArgument, "batch_size must be >= 1");
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw Error(ErrorCode::kInvalidArgument, "learning_rate must be finite and >= 0");
  }
  if (hidden < 1) throw Error(ErrorCode::kInvalidArgument, "hidden must be >= 1");
  if (protection.kind == ProtectionKind::kDp &&
      (!(protection.dp_sigma >= 0.0) || !std::isfinite(protection.dp_sigma))) {
    throw Error(ErrorCode::kInvalidArgument, "dp sigma must be finite and >= 0");
  }
}

LocalResult local_train(const ModelParams& params, const Matrix& features,
                        std::span<const int> labels, const TrainConfig& config,
                        std::uint64_t seed) {
  config.validate();
  if (static_cast<std::size_t>(features.rows()) != labels.size()) {
    throw Error(ErrorCode::kShapeMismatch, "feature rows and labels differ");
  }
  LocalResult out{params, 0.0};
  const std::size_t n = labels.size();
  if (n == 0) return out;

  Rng rng(seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<int> batch_labels;
  double loss_sum = 0.0;
  std::size_t batches = 0;
  const auto bs = static_cast<std::size_t>(config.batch_size);
  for (int epoch = 0; epoch < config.local_epochs; ++epoch) {
    seeded_shuffle(order, rng);
    for (std::size_t begin = 0; begin < n; begin += bs) {
      const std::span<const std::size_t> rows(order.data() + begin, std::min(bs, n - begin));
      batch_labels.clear();
      for (std::size_t r : rows) batch_labels.push_back(labels[r]);
      const LossAndGrad lg = loss_and_grad(out.params, gather_rows(features, rows), batch_labels);
      out.params.axpy(-config.learning_rate, lg.grad);
      loss_sum += lg.loss;
      ++batches;
    }
  }
  out.mean_loss = loss_sum / static_cast<double>(batches);
  return out;
}

ModelParams fedavg(std::span<const ModelParams> models, std::span<const std::size_t> counts) {
  if (models.empty()) throw Error(ErrorCode::kEmptyClientList, "no client models to average");
  if (counts.size() != models.size()) {
    throw Error(ErrorCode::kShapeMismatch, "one sample count per client model required");
  }
  std::size_t total = 0;
  for (std::size_t c : counts) {
    if (c == 0) throw Error(ErrorCode::kInvalidArgument, "client sample counts must be >= 1");
    total += c;
  }
  ModelParams out = models.front();
  out.w1.setZero();
  out.b1.setZero();
  out.w2.setZero();
  out.b2.setZero();
  for (std::size_t k = 0; k < models.size(); ++k) {
    if (!models[k].same_shape(out)) {
      throw Error(ErrorCode::kShapeMismatch, "client model " + std::to_string(k) +
                                                 " has a different shape");
    }
    out.axpy(static_cast<double>(counts[k]) / static_cast<double>(total), models[k]);
  }
  return out;
}

std::uint64_t model_init_seed(std::uint64_t master_seed) {
  const std::array<std::uint64_t, 1> words{kInitDomain};
  return combine_seed(master_seed, words);
}

std::uint64_t client_round_seed(std::uint64_t master_seed, int round, int client) {
  const std::array<std::uint64_t, 3> words{kTrainDomain, static_cast<std::uint64_t>(round),
                                           static_cast<std::uint64_t>(client)};
  return combine_seed(master_seed, words);
}

ShuffleConfig shuffle_config_for(const Protection& protection, std::uint64_t master_seed) {
  ShuffleConfig cfg;
  cfg.master_seed = master_seed;
  cfg.mode = protection.mode;
  cfg.block_size_override = protection.block_size;
  if (protection.kind == ProtectionKind::kDp) {
    cfg.dp_sigma = protection.dp_sigma;
    cfg.block_size_override.reset();
  }
  return cfg;
}

FederatedResult run_federated(const LabeledDataset& train, const LabeledDataset& test,
                              const ClientPartition& partition, const TrainConfig& config,
                              const EpochVariants* variants, const RoundCallback& on_round) {
  config.validate();
  if (train.empty()) throw Error(ErrorCode::kInvalidArgument, "training set is empty");
  train.validate();
  if (partition.num_clients() == 0) {
    throw Error(ErrorCode::kEmptyClientList, "partition has no clients");
  }
  for (const auto& shard : partition.assignments) {
    for (std::size_t i : shard) {
      if (i >= train.size()) {
        throw Error(ErrorCode::kInvalidArgument, "partition index beyond training set");
      }
    }
  }
  const ProtectionKind kind = config.protection.kind;
  if (kind == ProtectionKind::kCsvar) {
    if (variants == nullptr || variants->empty()) {
      throw Error(ErrorCode::kMissingVariant, "csvar protection needs pre-generated variants");
    }
    for (const auto& epoch : *variants) {
      if (epoch.size() != train.size() || !epoch.front().same_shape(train.images.front())) {
        throw Error(ErrorCode::kMissingVariant, "epoch variant does not cover the training set");
      }
    }
  }

  const int input_dim = static_cast<int>(train.images.front().size());
  FederatedResult result;
  result.final_params =
      init_model(input_dim, config.hidden, train.num_classes, model_init_seed(config.master_seed));
  const Matrix test_x = to_features(test.images);
  if (!test.empty() && test_x.cols() != input_dim) {
    throw Error(ErrorCode::kShapeMismatch, "test images differ in shape from training images");
  }
  const auto evaluate = [&](const ModelParams& p) {
    return test.empty() ? 0.0 : accuracy(p, test_x, test.labels);
  };
  result.initial_accuracy = evaluate(result.final_params);

  Matrix raw_x;
  if (kind == ProtectionKind::kNone) raw_x = to_features(train.images);
  const ShuffleConfig noise_cfg = shuffle_config_for(config.protection, config.master_seed);
  const std::size_t k_clients = partition.num_clients();
  const std::vector<std::size_t> counts = partition.sample_counts();

  for (int r = 0; r < config.rounds; ++r) {
    Matrix round_x;
    if (kind == ProtectionKind::kDp) {
      std::vector<ImageTensor> noisy(train.size());
      parallel_for(train.size(), [&](std::size_t i) {
        ShuffleConfig cfg = noise_cfg;
        cfg.epoch = static_cast<std::uint64_t>(r);
        noisy[i] = obfuscate(train.images[i], cfg, i);
      });
      round_x = to_features(noisy);
    } else if (kind == ProtectionKind::kCsvar) {
      round_x = to_features((*variants)[static_cast<std::size_t>(r) % variants->size()]);
    }
    const Matrix& x = kind == ProtectionKind::kNone ? raw_x : round_x;

    std::vector<LocalResult> locals(k_clients);
    const ModelParams global = result.final_params;
    parallel_for(k_clients, [&](std::size_t k) {
      const auto& shard = partition.assignments[k];
      if (shard.empty()) {
        throw Error(ErrorCode::kEmptyClient, "client " + std::to_string(k) + " has no samples");
      }
      std::vector<int> labels;
      labels.reserve(shard.size());
      for (std::size_t i : shard) labels.push_back(train.labels[i]);
      locals[k] = local_train(global, gather_rows(x, shard), labels, config,
                              client_round_seed(config.master_seed, r, static_cast<int>(k)));
    });

    std::vector<ModelParams> models;
    models.reserve(k_clients);
    double loss = 0.0;
    std::size_t total = 0;
    for (std::size_t k = 0; k < k_clients; ++k) {
      models.push_back(std::move(locals[k].params));
      loss += locals[k].mean_loss * static_cast<double>(counts[k]);
      total += counts[k];
    }
    result.final_params = fedavg(models, counts);
    if (!result.final_params.all_finite()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "model diverged (non-finite parameters) in round " + std::to_string(r + 1));
    }

    RoundReport report;
    report.round = r + 1;
    report.accuracy = evaluate(result.final_params);
    report.mean_loss = loss / static_cast<double>(total);
    report.client_counts = counts;
    result.reports.push_back(report);
    if (on_round) on_round(report, result.final_params);
  }
  return result;
}

std::string reports_to_csv(std::span<const RoundReport> reports) {
  std::string csv = "round,accuracy,mean_loss\n";
  for (const RoundReport& r : reports) {
    csv += std::to_string(r.round) + "," + format_double(r.accuracy) + "," +
           format_double(r.mean_loss) + "\n";
  }
  return csv;
}

std::string reports_to_json(const FederatedResult& result) {
  nlohmann::json j;
  j["initial_accuracy"] = result.initial_accuracy;
  j["final_accuracy"] =
      result.reports.empty() ? result.initial_accuracy : result.reports.back().accuracy;
  j["rounds"] = nlohmann::json::array();
  for (const RoundReport& r : result.reports) {
    j["rounds"].push_back({{"round", r.round},
                           {"accuracy", r.accuracy},
                           {"mean_loss", r.mean_loss},
                           {"client_counts", r.client_counts}});
  }
  return j.dump(2) + "\n";
}

}  // namespace csvar
